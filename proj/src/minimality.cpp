#include "bmin/minimality.hpp"

#include <cmath>
#include <sstream>

namespace bmin {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Minimal: return "minimal";
    case Verdict::NotMinimal: return "not_minimal";
    case Verdict::Undecided: return "undecided";
  }
  return "undecided";
}

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::NormNotTwoSided: return "norm_not_two_sided";
    case Reason::MomentsDisjoint: return "moments_disjoint";
    case Reason::CertificateFound: return "certificate_found";
    case Reason::GapUndecided: return "gap_undecided";
    case Reason::NearThreshold: return "near_threshold";
  }
  return "gap_undecided";
}

namespace {

struct Spectrum {
  EigenDecomposition decomp;
  double norm = 0;
  double tau = 0;
  // |lambda_max + lambda_min|: how far the spectrum is from being two-sided.
  double mismatch = 0;
};

Spectrum analyse(const HermitianMatrix& a, double tau) {
  Spectrum s;
  s.decomp = eig_hermitian(a);
  s.norm = spectral_norm(s.decomp);
  if (s.norm == 0) throw Error(ErrorCode::ZeroMatrix, "zero matrix has no extremal eigenspaces");
  s.tau = tau > 0 ? tau : default_cluster_tolerance(s.norm);
  const auto& ev = s.decomp.eigenvalues;
  s.mismatch = std::abs(ev[ev.size() - 1] + ev[0]);
  return s;
}

ExtremalSpaces extract(const Spectrum& s) {
  const auto clusters = cluster_eigenvalues(s.decomp, s.tau);
  const auto& ev = s.decomp.eigenvalues;
  const double top = ev[ev.size() - 1];
  const double bottom = ev[0];
  if (clusters.size() < 2 || std::abs(top - s.norm) > s.tau || std::abs(bottom + s.norm) > s.tau) {
    std::ostringstream os;
    os << "spectrum [" << bottom << ", " << top << "] does not contain both +-" << s.norm;
    throw Error(ErrorCode::NormNotTwoSided, os.str());
  }
  ExtremalSpaces out;
  out.norm = s.norm;
  out.tau = s.tau;
  out.minus = clusters.front().frame;
  out.plus = clusters.back().frame;
  const Eigen::Index r_minus = clusters.front().multiplicity;
  const Eigen::Index r_plus = clusters.back().multiplicity;
  const Eigen::Index n = ev.size();
  if (r_minus + r_plus < n) {
    out.rest = Subspace::span(s.decomp.vectors.middleCols(r_minus, n - r_minus - r_plus));
  }
  return out;
}

void require_unital(const SubalgebraBasis& basis) {
  if (!basis.is_unital()) {
    throw Error(ErrorCode::NonUnitalBasis, "the subalgebra basis does not contain the identity");
  }
}

}  // namespace

ExtremalSpaces extremal_eigenspaces(const HermitianMatrix& a, double tau) {
  return extract(analyse(a, tau));
}

Certificate build_certificate(const HermitianMatrix& a, const ExtremalSpaces& spaces, const DensityMatrix& r_plus,
                              const DensityMatrix& r_minus, const SubalgebraBasis& basis) {
  const CMatrix& qp = spaces.plus.frame();
  const CMatrix& qm = spaces.minus.frame();
  if (r_plus.n() != qp.cols() || r_minus.n() != qm.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "build_certificate: density sizes do not match eigenspace ranks");
  }
  Certificate c;
  c.x = HermitianMatrix::symmetrize(qp * r_plus.matrix() * qp.adjoint() - qm * r_minus.matrix() * qm.adjoint());
  c.rho_plus = r_plus;
  c.rho_minus = r_minus;
  const double norm = spectral_norm(a);
  c.residual_eq = (a.matrix() * c.x.matrix() - norm * abs_hermitian(c.x).matrix()).norm();
  c.residual_perp = compress(c.x, basis).cwiseAbs().maxCoeff();
  return c;
}

bool validate_certificate(const HermitianMatrix& a, const HermitianMatrix& x, const SubalgebraBasis& basis,
                          double tol) {
  if (a.n() != x.n() || a.n() != basis.n()) {
    throw Error(ErrorCode::DimensionMismatch, "validate_certificate: dimension mismatch");
  }
  const double x_norm = x.frobenius_norm();
  if (!(x_norm > tol)) return false;
  if (!in_trace_orthocomplement(x, basis, tol)) return false;
  const double a_norm = spectral_norm(a);
  const double residual = (a.matrix() * x.matrix() - a_norm * abs_hermitian(x).matrix()).norm();
  return residual <= tol * std::max(1.0, a_norm * x_norm);
}

MinimalityReport check_minimal(const HermitianMatrix& a, const SubalgebraBasis& basis, const MinimalityConfig& cfg) {
  if (a.n() != basis.n()) throw Error(ErrorCode::DimensionMismatch, "check_minimal: dimension mismatch");
  require_unital(basis);

  const Spectrum s = analyse(a, cfg.tau);
  MinimalityReport report;
  report.norm = s.norm;
  if (s.mismatch > 2 * s.tau) {
    report.verdict = Verdict::NotMinimal;
    report.reason = Reason::NormNotTwoSided;
    return report;
  }
  if (s.mismatch > s.tau) {
    report.verdict = Verdict::Undecided;
    report.reason = Reason::NearThreshold;
    return report;
  }

  const ExtremalSpaces spaces = extract(s);
  const auto res = decide_intersection(compress_family(spaces.plus, basis), compress_family(spaces.minus, basis), cfg.fw);
  report.distance = res.fw.distance;
  report.gap = res.fw.gap;
  report.lower_bound = res.fw.lower_bound;
  report.iterations = res.fw.iterations;
  switch (res.verdict) {
    case Intersection::Yes:
      report.verdict = Verdict::Minimal;
      report.reason = Reason::CertificateFound;
      report.certificate = build_certificate(a, spaces, res.fw.witness_plus, res.fw.witness_minus, basis);
      break;
    case Intersection::No:
      report.verdict = Verdict::NotMinimal;
      report.reason = Reason::MomentsDisjoint;
      break;
    case Intersection::Undecided:
      report.verdict = Verdict::Undecided;
      report.reason = Reason::GapUndecided;
      break;
  }
  return report;
}

bool is_support_pair(const Subspace& v, const Subspace& w, const SubalgebraBasis& basis, const FWConfig& cfg) {
  if (v.n() != w.n() || v.n() != basis.n()) throw Error(ErrorCode::DimensionMismatch, "is_support_pair: dimension mismatch");
  if ((v.frame().adjoint() * w.frame()).norm() > 1e-8) {
    throw Error(ErrorCode::NotOrthogonal, "is_support_pair: subspaces are not orthogonal");
  }
  require_unital(basis);
  return intersects(v, w, basis, cfg);
}

HermitianMatrix construct_minimal(const Subspace& v, const Subspace& w, double lambda, const HermitianMatrix& r,
                                  const SubalgebraBasis& basis, const FWConfig& cfg) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidLambda, "construct_minimal: lambda must be > 0");
  if (r.n() != v.n()) throw Error(ErrorCode::DimensionMismatch, "construct_minimal: R has the wrong size");
  if (spectral_norm(r) > lambda + 1e-10) throw Error(ErrorCode::RNormTooLarge, "construct_minimal: ||R|| > lambda");
  const HermitianMatrix pv = v.projector();
  const HermitianMatrix pw = w.projector();
  if ((r.matrix() * (pv + pw).matrix()).norm() > 1e-10 * std::max(1.0, r.frobenius_norm())) {
    throw Error(ErrorCode::RNotOrthogonal, "construct_minimal: R (P_V + P_W) != 0");
  }
  if (!is_support_pair(v, w, basis, cfg)) {
    throw Error(ErrorCode::NotSupportPair, "construct_minimal: moments of V and W are disjoint");
  }
  return lambda * (pv - pw) + r;
}

}  // namespace bmin
