#pragma once

// The affine family A(x) = A0 + sum_k x_k B_k over the self-adjoint part of B.
//
// The subdifferential of lambda_max(A(x)) is the moment of the top
// eigenspace; the norm's subdifferential is assembled from the two extreme
// sides. Minimality of A(x) is 0 in the subdifferential of the norm.

#include <optional>
#include <utility>
#include <vector>

#include "bmin/minimality.hpp"

namespace bmin {

struct AffineFamily {
  HermitianMatrix a0;
  SubalgebraBasis basis;

  AffineFamily(HermitianMatrix a0_, SubalgebraBasis basis_);
  Eigen::Index dim() const { return basis.dim(); }
};

HermitianMatrix evaluate(const AffineFamily& fam, const RVector& x);

enum class SubdiffKind { LambdaMax, LambdaMin, NormMaxSide, NormMinSide, NormBoth };

std::string_view to_string(SubdiffKind kind);

/// A subdifferential held as moment handles. The lambda_max side is
/// m_{S_max}; the lambda_min side is the reflected set -m_{S_min}.
struct SubdifferentialView {
  SubdiffKind kind = SubdiffKind::LambdaMax;
  std::optional<CompressedFamily> moment_max;
  std::optional<CompressedFamily> moment_min;

  /// Support function of the represented set at w. For NormBoth this is the
  /// support of the convex hull of the union: the larger of the two sides.
  double support(const RVector& w) const;
};

SubdifferentialView subdiff_lambda_max(const AffineFamily& fam, const RVector& x, double tau = 0);
SubdifferentialView subdiff_lambda_min(const AffineFamily& fam, const RVector& x, double tau = 0);

/// lambda_max(sum_k w_k Q_max* B_k Q_max).
double directional_derivative(const AffineFamily& fam, const RVector& x, const RVector& w, double tau = 0);

/// Throws ZeroMatrix if A(x) = 0.
SubdifferentialView subdiff_norm(const AffineFamily& fam, const RVector& x, double tau = 0);

/// 0 in d lambda_max + d lambda_min at a two-sided point, decided by the
/// distance between m_{S_max} and m_{S_min}. Throws NonUnitalBasis.
MinimalityReport is_minimal_variational(const AffineFamily& fam, const RVector& x, const MinimalityConfig& cfg = {});

enum class StepRule {
  /// Steepest descent along the min-norm element of the eps-subdifferential,
  /// exact line search.
  Exact,
  /// Subgradient from the top (or bottom) eigenvector, steps c / sqrt(k).
  Diminishing,
};

struct SolverConfig {
  FWConfig fw;
  StepRule step_rule = StepRule::Exact;
  /// Step scale for Diminishing; 0 selects ||A(x0)||.
  double c = 0;
  int max_iter = 20000;
  /// Exact rule stops once ||A(x)|| minus the certified lower bound is below
  /// opt_tol max(1, ||A(x)||).
  double opt_tol = 1e-10;
  double tau = 0;
};

struct BestApproxResult {
  RVector x_star;
  double dist = 0;          // ||A(x_star)||
  double lower_bound = 0;   // certified lower bound on dist(A0, B)
  std::vector<std::pair<int, double>> trace;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes ||A(x)|| over x. Never throws IterationCap: the best iterate is
/// returned with converged = false.
BestApproxResult best_approximation(const AffineFamily& fam, const RVector& x0, const SolverConfig& cfg = {});

}  // namespace bmin
