#pragma once

// Seeded generators and independent oracles shared by the test binaries.

#include <cmath>
#include <cstdint>
#include <random>
#include <tuple>
#include <array>

#include <Eigen/Eigenvalues>

#include "bmin/variational.hpp"

namespace bmin::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  Complex cnormal() {
    const double re = normal();
    return {re, normal()};
  }

  CMatrix cmatrix(Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cnormal();
    return m;
  }

  CVector cvector(Eigen::Index n) { return cmatrix(n, 1).col(0); }

  RVector rvector(Eigen::Index n) {
    RVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  HermitianMatrix hermitian(Eigen::Index n) {
    const CMatrix g = cmatrix(n, n);
    return HermitianMatrix::symmetrize(0.5 * (g + g.adjoint()));
  }

  /// Haar-ish unitary from the QR factorization of a Gaussian matrix.
  CMatrix unitary(Eigen::Index n) {
    Eigen::HouseholderQR<CMatrix> qr(cmatrix(n, n));
    return qr.householderQ() * CMatrix::Identity(n, n);
  }

  DensityMatrix density(Eigen::Index n) {
    const CMatrix g = cmatrix(n, n);
    CMatrix r = g * g.adjoint();
    r /= r.trace().real();
    return DensityMatrix(HermitianMatrix::symmetrize(r));
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Eigen's own solver, used only as an oracle.
inline Eigen::VectorXd oracle_eigenvalues(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double oracle_norm(const HermitianMatrix& a) { return oracle_eigenvalues(a).cwiseAbs().maxCoeff(); }

inline double oracle_norm(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

/// lambda_max of Q* W Q over the top eigenspace Q of a, both from Eigen's
/// solver. The eigenspace collects eigenvalues within tau of the largest.
inline double oracle_top_support(const HermitianMatrix& a, const HermitianMatrix& w, double tau) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
  const Eigen::Index n = a.n();
  Eigen::Index k = n - 1;
  while (k > 0 && es.eigenvalues()[n - 1] - es.eigenvalues()[k - 1] <= tau) --k;
  const CMatrix q = es.eigenvectors().rightCols(n - k);
  const CMatrix c = q.adjoint() * w.matrix() * q;
  Eigen::SelfAdjointEigenSolver<CMatrix> small(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
  return small.eigenvalues().maxCoeff();
}

/// Eigenvalues of a 3x3 Hermitian matrix by the trigonometric solution of its
/// characteristic cubic. Fast enough for dense grid searches.
inline std::array<double, 3> eig3(const Eigen::Matrix3cd& m) {
  const double a = m(0, 0).real(), b = m(1, 1).real(), c = m(2, 2).real();
  const Complex d = m(0, 1), e = m(1, 2), f = m(0, 2);
  const double q = (a + b + c) / 3;
  const double p1 = std::norm(d) + std::norm(e) + std::norm(f);
  const double p2 = (a - q) * (a - q) + (b - q) * (b - q) + (c - q) * (c - q) + 2 * p1;
  const double p = std::sqrt(p2 / 6);
  if (p < 1e-300) return {q, q, q};
  // det((M - qI)/p)
  const double aa = (a - q) / p, bb = (b - q) / p, cc = (c - q) / p;
  const Complex dd = d / p, ee = e / p, ff = f / p;
  const double det = aa * bb * cc + 2 * (dd * ee * std::conj(ff)).real() - aa * std::norm(ee) - bb * std::norm(ff) -
                     cc * std::norm(dd);
  const double r = std::clamp(det / 2, -1.0, 1.0);
  const double phi = std::acos(r) / 3;
  const double l1 = q + 2 * p * std::cos(phi);
  const double l3 = q + 2 * p * std::cos(phi + 2 * M_PI / 3);
  return {l3, 3 * q - l1 - l3, l1};
}

/// min over d in [-h, h]^3 (step) of ||A + diag(d)|| for 3x3 A.
inline double grid_min_diag3(const HermitianMatrix& a, double h, double step) {
  const int k = static_cast<int>(std::floor(h / step + 1e-9));
  Eigen::Matrix3cd m = a.matrix();
  double best = std::numeric_limits<double>::infinity();
  for (int i = -k; i <= k; ++i)
    for (int j = -k; j <= k; ++j)
      for (int l = -k; l <= k; ++l) {
        Eigen::Matrix3cd t = m;
        t(0, 0) += i * step;
        t(1, 1) += j * step;
        t(2, 2) += l * step;
        const auto ev = eig3(t);
        best = std::min(best, std::max(ev[2], -ev[0]));
      }
  return best;
}

/// A pair of orthonormal 3-vectors v, w with |v_i| = |w_i|: a support pair
/// for the diagonal algebra. The weights p_i = |v_i|^2 close a triangle
/// sum p_i e^{i theta_i} = 0, which makes w orthogonal to v.
inline std::pair<CVector, CVector> diagonal_support_pair3(Rng& rng) {
  RVector p(3);
  do {
    for (int i = 0; i < 3; ++i) p[i] = -std::log(rng.uniform(1e-12, 1.0));
    p /= p.sum();
  } while (p.maxCoeff() > 0.45 || p.minCoeff() < 0.05);
  const double cos_a = (p[2] * p[2] - p[0] * p[0] - p[1] * p[1]) / (2 * p[0] * p[1]);
  const double alpha = std::acos(std::clamp(cos_a, -1.0, 1.0));
  const Complex partial = p[0] + p[1] * std::polar(1.0, alpha);
  const double beta = std::arg(-partial);
  const double theta[3] = {0.0, alpha, beta};
  CVector v(3), w(3);
  for (int i = 0; i < 3; ++i) {
    const Complex phase = std::polar(1.0, rng.uniform(0, 2 * M_PI));
    v[i] = std::sqrt(p[i]) * phase;
    w[i] = v[i] * std::polar(1.0, theta[i]);
  }
  return {v, w};
}

enum class InstanceKind { RandomHermitian, SupportPair, RandomPair };

/// 3x3 instances with ||A|| = 1. The pair kinds are v v* - w w* + r z z* with
/// |r| < 1: two-sided by construction, minimal for a diagonal support pair and
/// generically not for a random orthonormal pair.
inline HermitianMatrix random_instance3(Rng& rng, InstanceKind kind) {
  if (kind == InstanceKind::RandomHermitian) {
    const HermitianMatrix h = rng.hermitian(3);
    return (1.0 / oracle_norm(h)) * h;
  }
  CVector v, w;
  if (kind == InstanceKind::SupportPair) {
    std::tie(v, w) = diagonal_support_pair3(rng);
  } else {
    const CMatrix u = rng.unitary(3);
    v = u.col(0);
    w = u.col(1);
  }
  CMatrix frame(3, 2);
  frame << v, w;
  Eigen::HouseholderQR<CMatrix> qr(frame);
  const CVector z = (qr.householderQ() * CMatrix::Identity(3, 3)).col(2);
  const double r = rng.uniform(-0.99, 0.99);
  return HermitianMatrix::symmetrize(v * v.adjoint() - w * w.adjoint() + r * z * z.adjoint());
}

}  // namespace bmin::testing
