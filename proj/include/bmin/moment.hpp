#pragma once

// Moment sets m_S = Phi(D_S) of subspaces relative to a basis of B.
//
// The set itself is never materialized. Three views are computable: sampled
// extreme points, the exact support function (a lambda_max of a compressed
// combination), and the distance between two moment sets by Frank-Wolfe
// over a product of spectrahedra.

#include <cstdint>
#include <vector>

#include "bmin/hermitian.hpp"
#include "bmin/subalgebra.hpp"

namespace bmin {

/// The compressions Q* B_k Q of a basis onto the frame Q of a subspace.
struct CompressedFamily {
  Subspace subspace;
  std::vector<HermitianMatrix> mats;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(mats.size()); }
  Eigen::Index rank() const { return subspace.rank(); }
  /// Sum_k w_k Q* B_k Q.
  HermitianMatrix combine(const RVector& w) const;
  /// (tr(R M_k))_k for an r x r matrix R.
  RVector moment(const CMatrix& r) const;
  /// (u* M_k u)_k for a coordinate vector u in C^r.
  RVector moment_of_vector(const CVector& u) const;
};

struct MomentPoint {
  RVector coords;
};

struct FWConfig {
  double gap_tol = 1e-9;
  double dist_tol = 1e-6;
  int max_iter = 20000;
  /// Keep the objective value of every iterate in FWResult::objective_trace.
  bool record_trace = false;
};

struct FWResult {
  double distance = 0;
  DensityMatrix witness_plus;   // r1 x r1, frame coordinates of S1
  DensityMatrix witness_minus;  // r2 x r2, frame coordinates of S2
  RVector point_plus;           // Phi(Q1 R+ Q1*)
  RVector point_minus;          // Phi(Q2 R- Q2*)
  double gap = 0;               // Frank-Wolfe gap at the returned iterate
  /// Certified lower bound on the true distance, from the supporting
  /// hyperplane at the final iterate.
  double lower_bound = 0;
  int iterations = 0;
  /// False when max_iter was reached before the stopping rule fired.
  bool converged = false;
  std::vector<double> objective_trace;
};

enum class Intersection { Yes, No, Undecided };

struct IntersectionResult {
  Intersection verdict = Intersection::Undecided;
  FWResult fw;
};

CompressedFamily compress_family(const Subspace& s, const SubalgebraBasis& basis);

MomentPoint moment_of_density(const CompressedFamily& fam, const DensityMatrix& r);

/// Point i is the moment of u u*, u a standard complex Gaussian in C^r drawn
/// from a generator seeded with seed + i and normalized.
std::vector<MomentPoint> sample_extreme(const CompressedFamily& fam, int count, std::uint64_t seed);

/// h(w) = lambda_max(sum_k w_k M_k) = max over m_S of <w, p>.
double support_function(const CompressedFamily& fam, const RVector& w);

/// Support of W(P_S B_k P_S) = union of eps m_S over eps in [0, 1].
double jnr_support(const CompressedFamily& fam, const RVector& w);

/// Minimizes 1/2 ||Phi(R+) - Phi(R-)||^2 over density matrices on S1 x S2 by
/// Frank-Wolfe with exact line search; stops at gap <= gap_tol or max_iter.
FWResult moment_distance(const CompressedFamily& f1, const CompressedFamily& f2, const FWConfig& cfg = {});
FWResult moment_distance(const Subspace& s1, const Subspace& s2, const SubalgebraBasis& basis,
                         const FWConfig& cfg = {});

/// Three-valued intersection test. Yes: distance <= dist_tol with
/// gap <= gap_tol. No: certified lower bound > dist_tol. Runs Frank-Wolfe
/// until one of the two holds or max_iter is hit.
IntersectionResult decide_intersection(const CompressedFamily& f1, const CompressedFamily& f2,
                                       const FWConfig& cfg = {});

/// decide_intersection collapsed to bool; throws Undecided.
bool intersects(const Subspace& s1, const Subspace& s2, const SubalgebraBasis& basis, const FWConfig& cfg = {});

}  // namespace bmin
