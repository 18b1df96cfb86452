#include "bmin/hermitian.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Jacobi>

namespace bmin {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::EmptySpan: return "EmptySpan";
    case ErrorCode::SpanMismatch: return "SpanMismatch";
    case ErrorCode::IterationCap: return "IterationCap";
    case ErrorCode::Undecided: return "Undecided";
    case ErrorCode::NormNotTwoSided: return "NormNotTwoSided";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::NonUnitalBasis: return "NonUnitalBasis";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::NotSupportPair: return "NotSupportPair";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::RNormTooLarge: return "RNormTooLarge";
    case ErrorCode::RNotOrthogonal: return "RNotOrthogonal";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

CMatrix averaged(const CMatrix& m) {
  CMatrix h = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) = Complex(h(i, i).real(), 0.0);
  return h;
}

double off_diagonal_norm(const CMatrix& m) {
  double sum = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j) sum += std::norm(m(i, j));
  return std::sqrt(sum);
}

// First entry of largest modulus made real-positive. Later entries only win
// a tie if they are larger by more than rounding.
void fix_phase(Eigen::Ref<CVector> v) {
  Eigen::Index best = 0;
  double best_abs = -1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs * (1 + 1e-12) + 1e-300) {
      best = i;
      best_abs = a;
    }
  }
  if (best_abs <= 0) return;
  v *= std::conj(v[best]) / best_abs;
  v[best] = Complex(best_abs, 0.0);
}

}  // namespace

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "HermitianMatrix: matrix is not square");
  }
  if (!m.allFinite()) throw Error(ErrorCode::InvalidInput, "HermitianMatrix: non-finite entry");
  const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  const double asym = m.size() ? (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > kHermitianTol * scale) {
    std::ostringstream os;
    os << "HermitianMatrix: asymmetry " << asym << " exceeds tolerance";
    throw Error(ErrorCode::InvalidInput, os.str());
  }
  m_ = averaged(m);
}

HermitianMatrix HermitianMatrix::symmetrize(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "HermitianMatrix: matrix is not square");
  }
  if (!m.allFinite()) throw Error(ErrorCode::InvalidInput, "HermitianMatrix: non-finite entry");
  return HermitianMatrix(averaged(m), Unchecked{});
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index n) {
  return HermitianMatrix(CMatrix::Zero(n, n), Unchecked{});
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  return HermitianMatrix(CMatrix::Identity(n, n), Unchecked{});
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
  return HermitianMatrix(CMatrix(d.cast<Complex>().asDiagonal()));
}

HermitianMatrix HermitianMatrix::outer(const CVector& v) {
  return symmetrize(v * v.adjoint());
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::DimensionMismatch, "HermitianMatrix: size mismatch");
  return HermitianMatrix(a.m_ + b.m_, HermitianMatrix::Unchecked{});
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::DimensionMismatch, "HermitianMatrix: size mismatch");
  return HermitianMatrix(a.m_ - b.m_, HermitianMatrix::Unchecked{});
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(s * a.m_, HermitianMatrix::Unchecked{});
}

double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::DimensionMismatch, "trace_inner: size mismatch");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
}

Subspace::Subspace(const CMatrix& frame) : q_(frame) {
  const Eigen::Index r = q_.cols();
  if (r < 1 || r > q_.rows()) {
    throw Error(ErrorCode::InvalidInput, "Subspace: rank must satisfy 1 <= r <= n");
  }
  if (!q_.allFinite()) throw Error(ErrorCode::InvalidInput, "Subspace: non-finite frame");
  const double err = (q_.adjoint() * q_ - CMatrix::Identity(r, r)).norm();
  if (err > 1e-10) {
    std::ostringstream os;
    os << "Subspace: frame is not orthonormal (||Q*Q - I||_F = " << err << ")";
    throw Error(ErrorCode::InvalidInput, os.str());
  }
}

Subspace Subspace::span(const CMatrix& columns) {
  if (columns.cols() < 1 || columns.cols() > columns.rows()) {
    throw Error(ErrorCode::InvalidInput, "Subspace::span: need 1 <= r <= n columns");
  }
  if (!columns.allFinite()) throw Error(ErrorCode::InvalidInput, "Subspace::span: non-finite column");
  CMatrix q = columns;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double original = q.col(j).norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < j; ++k) {
        q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
      }
    }
    const double residual = q.col(j).norm();
    if (residual <= 1e-10 * std::max(1.0, original)) {
      throw Error(ErrorCode::InvalidInput, "Subspace::span: columns are linearly dependent");
    }
    q.col(j) /= residual;
  }
  return Subspace(q);
}

HermitianMatrix Subspace::projector() const {
  return HermitianMatrix::symmetrize(q_ * q_.adjoint());
}

DensityMatrix::DensityMatrix(HermitianMatrix m) : m_(std::move(m)) {
  if (m_.n() < 1) throw Error(ErrorCode::InvalidInput, "DensityMatrix: empty matrix");
  if (std::abs(m_.trace() - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << m_.trace() << " is not 1";
    throw Error(ErrorCode::InvalidInput, os.str());
  }
  if (lambda_min(m_) < -1e-10) throw Error(ErrorCode::InvalidInput, "DensityMatrix: not PSD");
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index n) {
  return DensityMatrix((1.0 / static_cast<double>(n)) * HermitianMatrix::identity(n));
}

DensityMatrix DensityMatrix::pure(const CVector& v) {
  const double nrm = v.norm();
  if (!(nrm > 0)) throw Error(ErrorCode::InvalidInput, "DensityMatrix::pure: zero vector");
  return DensityMatrix(HermitianMatrix::outer(v / nrm));
}

EigenDecomposition eig_hermitian(const HermitianMatrix& a) {
  constexpr int kMaxSweeps = 100;
  const Eigen::Index n = a.n();
  CMatrix m = a.matrix();
  CMatrix v = CMatrix::Identity(n, n);
  const double tol = 1e-12 * m.norm();

  int sweep = 0;
  Eigen::JacobiRotation<Complex> rot;
  while (off_diagonal_norm(m) > tol) {
    if (sweep == kMaxSweeps) {
      throw Error(ErrorCode::NonConvergence, "eig_hermitian: Jacobi did not converge in 100 sweeps");
    }
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (m(p, q) == Complex(0.0, 0.0)) continue;
        rot.makeJacobi(m, p, q);
        m.applyOnTheLeft(p, q, rot.adjoint());
        m.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        m(p, q) = m(q, p) = Complex(0.0, 0.0);
        m(p, p) = Complex(m(p, p).real(), 0.0);
        m(q, q) = Complex(m(q, q).real(), 0.0);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return m(i, i).real() < m(j, j).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues[k] = m(src, src).real();
    out.vectors.col(k) = v.col(src);
    fix_phase(out.vectors.col(k));
  }
  out.residual = (a.matrix() * out.vectors - out.vectors * out.eigenvalues.cast<Complex>().asDiagonal()).norm();
  out.sweeps = sweep;
  return out;
}

std::vector<EigenCluster> cluster_eigenvalues(const EigenDecomposition& decomp, double tau) {
  if (!(tau > 0)) throw Error(ErrorCode::InvalidInput, "cluster_eigenvalues: tau must be positive");
  std::vector<EigenCluster> clusters;
  const Eigen::Index n = decomp.eigenvalues.size();
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    if (k < n && decomp.eigenvalues[k] - decomp.eigenvalues[k - 1] <= tau) continue;
    const Eigen::Index count = k - start;
    EigenCluster c;
    c.value = decomp.eigenvalues.segment(start, count).mean();
    c.frame = Subspace::span(decomp.vectors.middleCols(start, count));
    c.multiplicity = static_cast<int>(count);
    clusters.push_back(std::move(c));
    start = k;
  }
  return clusters;
}

double spectral_norm(const EigenDecomposition& decomp) {
  if (decomp.eigenvalues.size() == 0) return 0.0;
  return std::max(std::abs(decomp.eigenvalues[0]),
                  std::abs(decomp.eigenvalues[decomp.eigenvalues.size() - 1]));
}

double spectral_norm(const HermitianMatrix& a) { return spectral_norm(eig_hermitian(a)); }

HermitianMatrix abs_hermitian(const HermitianMatrix& x) {
  const auto d = eig_hermitian(x);
  const CMatrix& q = d.vectors;
  return HermitianMatrix::symmetrize(q * d.eigenvalues.cwiseAbs().cast<Complex>().asDiagonal() * q.adjoint());
}

DensityMatrix project_density(const HermitianMatrix& m) {
  const auto d = eig_hermitian(m);
  const RVector p = project_simplex(d.eigenvalues);
  const CMatrix& q = d.vectors;
  CMatrix r = q * p.cast<Complex>().asDiagonal() * q.adjoint();
  // Rounding in the reassembly can move the trace by a few ulps.
  r /= r.trace().real();
  return DensityMatrix(HermitianMatrix::symmetrize(r));
}

EigenPair min_eigpair(const HermitianMatrix& g) {
  if (g.n() < 1) throw Error(ErrorCode::InvalidInput, "min_eigpair: empty matrix");
  auto d = eig_hermitian(g);
  return {d.eigenvalues[0], d.vectors.col(0)};
}

EigenPair max_eigpair(const HermitianMatrix& g) {
  if (g.n() < 1) throw Error(ErrorCode::InvalidInput, "max_eigpair: empty matrix");
  auto d = eig_hermitian(g);
  const Eigen::Index last = g.n() - 1;
  return {d.eigenvalues[last], d.vectors.col(last)};
}

double lambda_max(const HermitianMatrix& a) { return max_eigpair(a).value; }
double lambda_min(const HermitianMatrix& a) { return min_eigpair(a).value; }

}  // namespace bmin
