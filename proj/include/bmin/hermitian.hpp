#pragma once

// Dense complex Hermitian linear algebra: the Jacobi eigensolver, spectral
// functions, and projections onto the simplex and the density matrices.

#include <algorithm>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bmin/error.hpp"

namespace bmin {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Asymmetry above this (relative to max(1, max |a_ij|)) is rejected on
/// construction; anything below is averaged away.
inline constexpr double kHermitianTol = 1e-12;

/// Immutable n x n complex self-adjoint matrix.
///
/// The checked constructor rejects non-finite entries and asymmetry above
/// kHermitianTol; the stored matrix is always exactly (M + M*)/2 with a real
/// diagonal.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& m);

  /// Averages with the adjoint without the asymmetry check. For internally
  /// produced matrices that are Hermitian up to rounding.
  static HermitianMatrix symmetrize(const CMatrix& m);

  static HermitianMatrix zero(Eigen::Index n);
  static HermitianMatrix identity(Eigen::Index n);
  static HermitianMatrix diagonal(const RVector& d);
  static HermitianMatrix from_real(const RMatrix& m) { return HermitianMatrix(CMatrix(m.cast<Complex>())); }
  /// v v* for a column vector v.
  static HermitianMatrix outer(const CVector& v);

  Eigen::Index n() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double frobenius_norm() const { return m_.norm(); }
  double trace() const { return m_.trace().real(); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

 private:
  struct Unchecked {};
  HermitianMatrix(CMatrix m, Unchecked) : m_(std::move(m)) {}

  CMatrix m_;
};

/// Real trace inner product tr(A B) of two Hermitian matrices.
double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b);

/// n x r matrix with orthonormal columns; the frame of a subspace of C^n.
class Subspace {
 public:
  Subspace() = default;

  /// Takes the frame as given; throws InvalidInput unless
  /// ||Q*Q - I||_F <= 1e-10 and 1 <= r <= n.
  explicit Subspace(const CMatrix& frame);

  /// Orthonormal basis of the column span (modified Gram-Schmidt, two
  /// passes). Throws InvalidInput if the columns are rank deficient.
  static Subspace span(const CMatrix& columns);

  Eigen::Index n() const { return q_.rows(); }
  Eigen::Index rank() const { return q_.cols(); }
  const CMatrix& frame() const { return q_; }

  /// Orthogonal projection P_S = Q Q*.
  HermitianMatrix projector() const;

 private:
  CMatrix q_;
};

struct EigenDecomposition {
  RVector eigenvalues;  // ascending
  CMatrix vectors;      // unitary, columns are eigenvectors
  double residual = 0;  // ||A Q - Q diag(eigenvalues)||_F
  int sweeps = 0;
};

struct EigenCluster {
  double value = 0;
  Subspace frame;
  int multiplicity = 0;
};

/// PSD Hermitian matrix of unit trace.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Throws InvalidInput unless min eigenvalue >= -1e-10 and |tr - 1| <= 1e-12.
  explicit DensityMatrix(HermitianMatrix m);

  static DensityMatrix maximally_mixed(Eigen::Index n);
  /// v v* / ||v||^2.
  static DensityMatrix pure(const CVector& v);

  Eigen::Index n() const { return m_.n(); }
  const HermitianMatrix& hermitian() const { return m_; }
  const CMatrix& matrix() const { return m_.matrix(); }

 private:
  HermitianMatrix m_;
};

/// Cyclic complex Jacobi. Eigenvalues ascending; each eigenvector has its
/// first entry of largest modulus made real-positive.
/// Throws NonConvergence if the off-diagonal Frobenius norm is still above
/// 1e-12 ||A||_F after 100 sweeps.
EigenDecomposition eig_hermitian(const HermitianMatrix& a);

/// Greedy ascending scan: neighbours merge iff their gap is <= tau.
std::vector<EigenCluster> cluster_eigenvalues(const EigenDecomposition& decomp, double tau);

/// 1e-8 * max(1, norm).
inline double default_cluster_tolerance(double norm) { return 1e-8 * std::max(1.0, norm); }

double spectral_norm(const HermitianMatrix& a);
double spectral_norm(const EigenDecomposition& decomp);

/// |X| = Q |Lambda| Q*.
HermitianMatrix abs_hermitian(const HermitianMatrix& x);

/// Euclidean projection onto {x >= 0, sum x = 1} by sort and threshold.
template <typename Derived>
RVector project_simplex(const Eigen::MatrixBase<Derived>& v) {
  RVector x = v;
  const Eigen::Index n = x.size();
  if (n == 0) throw Error(ErrorCode::InvalidInput, "project_simplex: empty vector");
  if (!x.allFinite()) throw Error(ErrorCode::InvalidInput, "project_simplex: non-finite entry");
  RVector u = x;
  std::sort(u.data(), u.data() + n, std::greater<double>());
  double cumulative = 0;
  double theta = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0) theta = candidate;
  }
  return (x.array() - theta).max(0.0).matrix();
}

DensityMatrix project_density(const HermitianMatrix& m);

struct EigenPair {
  double value = 0;
  CVector vector;
};

EigenPair min_eigpair(const HermitianMatrix& g);
EigenPair max_eigpair(const HermitianMatrix& g);

double lambda_max(const HermitianMatrix& a);
double lambda_min(const HermitianMatrix& a);

}  // namespace bmin
