#pragma once

// B-minimality of Hermitian matrices: ||A|| <= ||A + B|| for every B in B.
//
// For a unital B, A is minimal iff +-||A|| are both eigenvalues and the
// moments of the two extremal eigenspaces intersect; a common point yields a
// certificate X = Q+ R+ Q+* - Q- R- Q-* in the trace orthocomplement of B
// with A X = ||A|| |X|.

#include <optional>

#include "bmin/moment.hpp"

namespace bmin {

struct ExtremalSpaces {
  double norm = 0;
  double tau = 0;
  Subspace plus;                // eigenspace of +||A||
  Subspace minus;               // eigenspace of -||A||
  std::optional<Subspace> rest;  // orthogonal complement of plus + minus
};

struct Certificate {
  HermitianMatrix x;
  DensityMatrix rho_plus;
  DensityMatrix rho_minus;
  double residual_eq = 0;    // ||A X - ||A|| |X|||_F
  double residual_perp = 0;  // max_k |tr(X B_k)|
};

enum class Verdict { Minimal, NotMinimal, Undecided };

enum class Reason {
  NormNotTwoSided,
  MomentsDisjoint,
  CertificateFound,
  GapUndecided,
  /// |lambda_max + lambda_min| lies between tau and 2 tau.
  NearThreshold,
};

std::string_view to_string(Verdict v);
std::string_view to_string(Reason r);

struct MinimalityConfig {
  FWConfig fw;
  /// Eigenvalue clustering tolerance; 0 selects 1e-8 max(1, ||A||).
  double tau = 0;
};

struct MinimalityReport {
  Verdict verdict = Verdict::Undecided;
  Reason reason = Reason::GapUndecided;
  double norm = 0;
  double distance = 0;  // between the two extremal moments; 0 if not computed
  double gap = 0;
  double lower_bound = 0;
  int iterations = 0;
  std::optional<Certificate> certificate;
};

/// Throws ZeroMatrix for A = 0 and NormNotTwoSided unless both
/// |lambda_max - ||A||| <= tau and |lambda_min + ||A||| <= tau.
ExtremalSpaces extremal_eigenspaces(const HermitianMatrix& a, double tau = 0);

/// Throws NonUnitalBasis if I_n is not in the span of the basis, and
/// ZeroMatrix for A = 0.
MinimalityReport check_minimal(const HermitianMatrix& a, const SubalgebraBasis& basis,
                               const MinimalityConfig& cfg = {});

/// X = Q+ R+ Q+* - Q- R- Q-*, with both residuals evaluated.
Certificate build_certificate(const HermitianMatrix& a, const ExtremalSpaces& spaces, const DensityMatrix& r_plus,
                              const DensityMatrix& r_minus, const SubalgebraBasis& basis);

bool validate_certificate(const HermitianMatrix& a, const HermitianMatrix& x, const SubalgebraBasis& basis,
                          double tol);

/// V and W orthogonal (within 1e-8) with intersecting moments. Throws
/// NotOrthogonal, NonUnitalBasis or Undecided.
bool is_support_pair(const Subspace& v, const Subspace& w, const SubalgebraBasis& basis, const FWConfig& cfg = {});

/// lambda (P_V - P_W) + R for a support pair (V, W), lambda > 0, ||R|| <= lambda
/// and R (P_V + P_W) = 0.
HermitianMatrix construct_minimal(const Subspace& v, const Subspace& w, double lambda, const HermitianMatrix& r,
                                  const SubalgebraBasis& basis, const FWConfig& cfg = {});

}  // namespace bmin
