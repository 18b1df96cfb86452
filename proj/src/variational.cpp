#include "bmin/variational.hpp"

#include <cmath>

namespace bmin {

std::string_view to_string(SubdiffKind kind) {
  switch (kind) {
    case SubdiffKind::LambdaMax: return "lambda_max";
    case SubdiffKind::LambdaMin: return "lambda_min";
    case SubdiffKind::NormMaxSide: return "norm_max_side";
    case SubdiffKind::NormMinSide: return "norm_min_side";
    case SubdiffKind::NormBoth: return "norm_both";
  }
  return "lambda_max";
}

AffineFamily::AffineFamily(HermitianMatrix a0_, SubalgebraBasis basis_)
    : a0(std::move(a0_)), basis(std::move(basis_)) {
  if (a0.n() != basis.n()) throw Error(ErrorCode::DimensionMismatch, "AffineFamily: A0 and basis differ in size");
}

HermitianMatrix evaluate(const AffineFamily& fam, const RVector& x) {
  if (x.size() != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "evaluate: length(x) != dim(B)");
  return fam.a0 + fam.basis.combine(x);
}

double SubdifferentialView::support(const RVector& w) const {
  const auto max_side = [&] { return support_function(*moment_max, w); };
  const auto min_side = [&] { return support_function(*moment_min, RVector(-w)); };
  switch (kind) {
    case SubdiffKind::LambdaMax:
    case SubdiffKind::NormMaxSide: return max_side();
    case SubdiffKind::LambdaMin:
    case SubdiffKind::NormMinSide: return min_side();
    case SubdiffKind::NormBoth: return std::max(max_side(), min_side());
  }
  return max_side();
}

namespace {

struct Sides {
  EigenDecomposition decomp;
  double norm = 0;
  double tau = 0;
  Subspace top;
  Subspace bottom;
};

Sides sides_at(const AffineFamily& fam, const RVector& x, double tau) {
  Sides s;
  s.decomp = eig_hermitian(evaluate(fam, x));
  s.norm = spectral_norm(s.decomp);
  s.tau = tau > 0 ? tau : default_cluster_tolerance(s.norm);
  const auto clusters = cluster_eigenvalues(s.decomp, s.tau);
  s.top = clusters.back().frame;
  s.bottom = clusters.front().frame;
  return s;
}

double lam_max(const Sides& s) { return s.decomp.eigenvalues[s.decomp.eigenvalues.size() - 1]; }
double lam_min(const Sides& s) { return s.decomp.eigenvalues[0]; }

// Certified lower bound on min_x ||A(x)|| from a Hermitian Y: after removing
// its B-component, |tr(A0 Y')| / ||Y'||_1 <= ||A0 + B|| for every B in B.
// When Y is nearly inside B, Y' is mostly rounding noise; the numerator is
// reduced by a bound on that noise so the ratio stays certified.
double dual_bound(const AffineFamily& fam, const CMatrix& y) {
  const HermitianMatrix yh = HermitianMatrix::symmetrize(y);
  const HermitianMatrix yperp = yh - fam.basis.combine(compress(yh, fam.basis));
  const double trace_norm = eig_hermitian(yperp).eigenvalues.cwiseAbs().sum();
  if (!(trace_norm > 0)) return 0.0;
  const double noise = 1e-13 * static_cast<double>(fam.basis.n()) * yh.frobenius_norm() * fam.a0.frobenius_norm();
  return std::max(0.0, (trace_inner(fam.a0, yperp) - noise) / trace_norm);
}

// Frames of the eigenvectors with eigenvalue >= lo (top) and <= hi (bottom).
std::optional<Subspace> frame_above(const EigenDecomposition& d, double lo) {
  const Eigen::Index n = d.eigenvalues.size();
  Eigen::Index k = n;
  while (k > 0 && d.eigenvalues[k - 1] >= lo) --k;
  if (k == n) return std::nullopt;
  return Subspace::span(d.vectors.rightCols(n - k));
}

std::optional<Subspace> frame_below(const EigenDecomposition& d, double hi) {
  Eigen::Index k = 0;
  while (k < d.eigenvalues.size() && d.eigenvalues[k] <= hi) ++k;
  if (k == 0) return std::nullopt;
  return Subspace::span(d.vectors.leftCols(k));
}

struct MinNorm {
  RVector g;  // min-norm point of conv(m_top u -m_bottom)
  CMatrix y;  // n x n matrix with Phi(y) = g
};

// Frank-Wolfe for the min-norm point of conv(m_top u -m_bottom).
MinNorm min_norm_subgradient(const AffineFamily& fam, const std::optional<Subspace>& top,
                             const std::optional<Subspace>& bottom, const CVector& start, bool start_top) {
  std::optional<CompressedFamily> ft, fb;
  if (top) ft = compress_family(*top, fam.basis);
  if (bottom) fb = compress_family(*bottom, fam.basis);

  MinNorm out;
  const double sign0 = start_top ? 1.0 : -1.0;
  out.y = sign0 * (start * start.adjoint());
  out.g = sign0 * compress(HermitianMatrix::outer(start), fam.basis);

  for (int it = 0; it < 5000; ++it) {
    RVector best_s;
    CMatrix best_v;
    double best_val = std::numeric_limits<double>::infinity();
    if (ft) {
      const auto e = min_eigpair(ft->combine(out.g));
      if (e.value < best_val) {
        best_val = e.value;
        best_s = ft->moment_of_vector(e.vector);
        const CVector v = top->frame() * e.vector;
        best_v = v * v.adjoint();
      }
    }
    if (fb) {
      const auto e = max_eigpair(fb->combine(out.g));
      if (-e.value < best_val) {
        best_val = -e.value;
        best_s = -fb->moment_of_vector(e.vector);
        const CVector v = bottom->frame() * e.vector;
        best_v = -(v * v.adjoint());
      }
    }
    const RVector dir = best_s - out.g;
    const double gap = -out.g.dot(dir);
    if (gap <= 1e-15 || dir.squaredNorm() == 0) break;
    const double gamma = std::clamp(gap / dir.squaredNorm(), 0.0, 1.0);
    out.g += gamma * dir;
    out.y += gamma * (best_v - out.y);
  }
  out.g = compress(HermitianMatrix::symmetrize(out.y), fam.basis);
  return out;
}

// Minimizes the convex function t -> ||A(x + t d)|| over t >= 0.
double line_search(const AffineFamily& fam, const RVector& x, const RVector& d, double f0, double h0) {
  const auto phi = [&](double t) { return spectral_norm(evaluate(fam, x + t * d)); };
  double h = h0;
  double fh = phi(h);
  int guard = 0;
  while (fh >= f0 && guard++ < 60) {
    h *= 0.5;
    fh = phi(h);
  }
  if (fh >= f0) return 0.0;
  guard = 0;
  while (guard++ < 60) {
    const double f2 = phi(2 * h);
    if (f2 >= fh) break;
    h *= 2;
    fh = f2;
  }
  // Golden section on [0, 2h]; the minimum is bracketed there.
  const double ratio = (std::sqrt(5.0) - 1) / 2;
  double a = 0, b = 2 * h;
  double c = b - ratio * (b - a), e = a + ratio * (b - a);
  double fc = phi(c), fe = phi(e);
  for (int i = 0; i < 120 && b - a > 1e-15 * std::max(1.0, b); ++i) {
    if (fc <= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - ratio * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + ratio * (b - a);
      fe = phi(e);
    }
  }
  return fc <= fe ? c : e;
}

// The certification the stopping rule relies on: a two-sided iterate whose
// extremal moments intersect.
bool certified_minimal(const AffineFamily& fam, const Sides& s, const FWConfig& cfg) {
  if (std::abs(lam_max(s) + lam_min(s)) > s.tau) return false;
  const auto res = decide_intersection(compress_family(s.top, fam.basis), compress_family(s.bottom, fam.basis), cfg);
  return res.verdict == Intersection::Yes;
}

BestApproxResult solve_exact(const AffineFamily& fam, const RVector& x0, const SolverConfig& cfg) {
  BestApproxResult out;
  RVector x = x0;
  double eps = -1;
  for (int it = 0; it < cfg.max_iter; ++it) {
    out.iterations = it + 1;
    const Sides s = sides_at(fam, x, cfg.tau);
    const double f = s.norm;
    out.trace.emplace_back(it, f);
    out.x_star = x;
    out.dist = f;
    if (f == 0) {
      out.converged = true;
      return out;
    }
    if (certified_minimal(fam, s, cfg.fw)) {
      out.converged = true;
      out.lower_bound = std::max(out.lower_bound, f);
      return out;
    }
    if (eps < 0) eps = 0.1 * f;
    eps = std::min(eps, f);

    bool moved = false;
    while (!moved) {
      const bool top_active = lam_max(s) >= -lam_min(s);
      const auto top = frame_above(s.decomp, f - eps);
      const auto bottom = frame_below(s.decomp, -f + eps);
      const Eigen::Index last = s.decomp.eigenvalues.size() - 1;
      const CVector start = top_active ? CVector(s.decomp.vectors.col(last)) : CVector(s.decomp.vectors.col(0));
      const MinNorm full = min_norm_subgradient(fam, top, bottom, start, top_active);
      out.lower_bound = std::max(out.lower_bound, dual_bound(fam, full.y));
      if (f - out.lower_bound <= cfg.opt_tol * std::max(1.0, f)) {
        out.converged = true;
        return out;
      }
      const double gnorm2 = full.g.squaredNorm();
      if (gnorm2 > 1e-28) {
        const RVector d = -full.g;
        const double t = line_search(fam, x, d, f, f / gnorm2);
        if (t > 0) {
          const RVector xn = x + t * d;
          if (spectral_norm(evaluate(fam, xn)) < f - 1e-15 * std::max(1.0, f)) {
            x = xn;
            moved = true;
            break;
          }
        }
      }
      eps *= 0.1;
      if (eps < 1e-15 * f) return out;
    }
  }
  const Sides s = sides_at(fam, x, cfg.tau);
  out.x_star = x;
  out.dist = s.norm;
  return out;
}

BestApproxResult solve_diminishing(const AffineFamily& fam, const RVector& x0, const SolverConfig& cfg) {
  BestApproxResult out;
  RVector x = x0;
  double c = cfg.c;
  out.x_star = x0;
  out.dist = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= cfg.max_iter; ++k) {
    out.iterations = k;
    const Sides s = sides_at(fam, x, cfg.tau);
    const double f = s.norm;
    if (c <= 0) c = f;
    out.trace.emplace_back(k - 1, f);
    if (f < out.dist) {
      out.dist = f;
      out.x_star = x;
    }
    if (f == 0 || certified_minimal(fam, s, cfg.fw)) {
      out.converged = true;
      return out;
    }
    // Tie goes to the lambda_max side.
    const Eigen::Index last = s.decomp.eigenvalues.size() - 1;
    const bool top_active = lam_max(s) >= -lam_min(s);
    const CVector q = top_active ? CVector(s.decomp.vectors.col(last)) : CVector(s.decomp.vectors.col(0));
    RVector g = compress(HermitianMatrix::outer(q), fam.basis);
    if (!top_active) g = -g;
    const double gn = g.norm();
    if (gn == 0) return out;
    x -= (c / std::sqrt(static_cast<double>(k))) * g / gn;
  }
  return out;
}

}  // namespace

SubdifferentialView subdiff_lambda_max(const AffineFamily& fam, const RVector& x, double tau) {
  const Sides s = sides_at(fam, x, tau);
  SubdifferentialView v;
  v.kind = SubdiffKind::LambdaMax;
  v.moment_max = compress_family(s.top, fam.basis);
  return v;
}

SubdifferentialView subdiff_lambda_min(const AffineFamily& fam, const RVector& x, double tau) {
  const Sides s = sides_at(fam, x, tau);
  SubdifferentialView v;
  v.kind = SubdiffKind::LambdaMin;
  v.moment_min = compress_family(s.bottom, fam.basis);
  return v;
}

double directional_derivative(const AffineFamily& fam, const RVector& x, const RVector& w, double tau) {
  if (w.size() != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "directional_derivative: length(w) != dim(B)");
  return subdiff_lambda_max(fam, x, tau).support(w);
}

SubdifferentialView subdiff_norm(const AffineFamily& fam, const RVector& x, double tau) {
  const Sides s = sides_at(fam, x, tau);
  if (s.norm == 0) throw Error(ErrorCode::ZeroMatrix, "subdiff_norm: A(x) = 0");
  const bool max_side = std::abs(lam_max(s) - s.norm) <= s.tau;
  const bool min_side = std::abs(lam_min(s) + s.norm) <= s.tau;
  SubdifferentialView v;
  if (max_side && min_side) {
    v.kind = SubdiffKind::NormBoth;
  } else {
    v.kind = max_side ? SubdiffKind::NormMaxSide : SubdiffKind::NormMinSide;
  }
  if (max_side) v.moment_max = compress_family(s.top, fam.basis);
  if (min_side) v.moment_min = compress_family(s.bottom, fam.basis);
  return v;
}

MinimalityReport is_minimal_variational(const AffineFamily& fam, const RVector& x, const MinimalityConfig& cfg) {
  if (!fam.basis.is_unital()) {
    throw Error(ErrorCode::NonUnitalBasis, "is_minimal_variational: the basis does not contain the identity");
  }
  const HermitianMatrix a = evaluate(fam, x);
  const Sides s = sides_at(fam, x, cfg.tau);
  if (s.norm == 0) throw Error(ErrorCode::ZeroMatrix, "is_minimal_variational: A(x) = 0");

  MinimalityReport report;
  report.norm = s.norm;
  const double mismatch = std::abs(lam_max(s) + lam_min(s));
  if (mismatch > 2 * s.tau) {
    report.verdict = Verdict::NotMinimal;
    report.reason = Reason::NormNotTwoSided;
    return report;
  }
  if (mismatch > s.tau) {
    report.verdict = Verdict::Undecided;
    report.reason = Reason::NearThreshold;
    return report;
  }

  // 0 in m_{S_max} - m_{S_min} iff the two moments meet.
  const auto res = decide_intersection(compress_family(s.top, fam.basis), compress_family(s.bottom, fam.basis), cfg.fw);
  report.distance = res.fw.distance;
  report.gap = res.fw.gap;
  report.lower_bound = res.fw.lower_bound;
  report.iterations = res.fw.iterations;
  switch (res.verdict) {
    case Intersection::Yes: {
      ExtremalSpaces spaces;
      spaces.norm = s.norm;
      spaces.tau = s.tau;
      spaces.plus = s.top;
      spaces.minus = s.bottom;
      report.verdict = Verdict::Minimal;
      report.reason = Reason::CertificateFound;
      report.certificate = build_certificate(a, spaces, res.fw.witness_plus, res.fw.witness_minus, fam.basis);
      break;
    }
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

BestApproxResult best_approximation(const AffineFamily& fam, const RVector& x0, const SolverConfig& cfg) {
  if (x0.size() != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "best_approximation: length(x0) != dim(B)");
  if (cfg.max_iter < 1) throw Error(ErrorCode::InvalidInput, "best_approximation: max_iter must be >= 1");
  BestApproxResult res = cfg.step_rule == StepRule::Exact ? solve_exact(fam, x0, cfg) : solve_diminishing(fam, x0, cfg);
  // The bound can overshoot dist by rounding alone.
  res.lower_bound = std::min(res.lower_bound, res.dist);
  return res;
}

}  // namespace bmin
