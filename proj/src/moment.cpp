#include "bmin/moment.hpp"

#include <cmath>
#include <random>

namespace bmin {

HermitianMatrix CompressedFamily::combine(const RVector& w) const {
  if (w.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "support: direction length != dim(B)");
  CMatrix m = CMatrix::Zero(rank(), rank());
  for (Eigen::Index k = 0; k < dim(); ++k) m += w[k] * mats[static_cast<std::size_t>(k)].matrix();
  return HermitianMatrix::symmetrize(m);
}

RVector CompressedFamily::moment(const CMatrix& r) const {
  RVector out(dim());
  for (Eigen::Index k = 0; k < dim(); ++k) {
    // tr(R M) = sum_ij R_ij conj(M_ij) for Hermitian M.
    out[k] = (r.array() * mats[static_cast<std::size_t>(k)].matrix().array().conjugate()).sum().real();
  }
  return out;
}

RVector CompressedFamily::moment_of_vector(const CVector& u) const {
  RVector out(dim());
  for (Eigen::Index k = 0; k < dim(); ++k) {
    out[k] = u.dot(mats[static_cast<std::size_t>(k)].matrix() * u).real();
  }
  return out;
}

CompressedFamily compress_family(const Subspace& s, const SubalgebraBasis& basis) {
  if (s.n() != basis.n()) throw Error(ErrorCode::DimensionMismatch, "compress_family: dimension mismatch");
  CompressedFamily fam{s, {}};
  fam.mats.reserve(static_cast<std::size_t>(basis.dim()));
  const CMatrix& q = s.frame();
  for (const auto& b : basis.elements()) {
    fam.mats.push_back(HermitianMatrix::symmetrize(q.adjoint() * b.matrix() * q));
  }
  return fam;
}

MomentPoint moment_of_density(const CompressedFamily& fam, const DensityMatrix& r) {
  if (r.n() != fam.rank()) throw Error(ErrorCode::DimensionMismatch, "moment_of_density: R must be r x r");
  return {fam.moment(r.matrix())};
}

std::vector<MomentPoint> sample_extreme(const CompressedFamily& fam, int count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::InvalidInput, "sample_extreme: count must be >= 1");
  std::vector<MomentPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  const Eigen::Index r = fam.rank();
  for (int i = 0; i < count; ++i) {
    std::mt19937_64 gen(seed + static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector u(r);
    for (Eigen::Index j = 0; j < r; ++j) {
      const double re = normal(gen);
      const double im = normal(gen);
      u[j] = Complex(re, im);
    }
    u.normalize();
    out.push_back({fam.moment_of_vector(u)});
  }
  return out;
}

double support_function(const CompressedFamily& fam, const RVector& w) {
  return lambda_max(fam.combine(w));
}

double jnr_support(const CompressedFamily& fam, const RVector& w) {
  return std::max(0.0, support_function(fam, w));
}

namespace {

struct FrankWolfe {
  const CompressedFamily& f1;
  const CompressedFamily& f2;
  const FWConfig& cfg;
  bool stop_when_decided;

  FWResult run() const {
    if (f1.dim() != f2.dim() || f1.subspace.n() != f2.subspace.n()) {
      throw Error(ErrorCode::DimensionMismatch, "moment_distance: families do not share a basis");
    }
    if (cfg.max_iter < 1 || !(cfg.gap_tol > 0) || !(cfg.dist_tol > 0)) {
      throw Error(ErrorCode::InvalidInput, "moment_distance: invalid Frank-Wolfe configuration");
    }
    const Eigen::Index r1 = f1.rank();
    const Eigen::Index r2 = f2.rank();
    CMatrix x1 = CMatrix::Identity(r1, r1) / static_cast<double>(r1);
    CMatrix x2 = CMatrix::Identity(r2, r2) / static_cast<double>(r2);
    RVector p1 = f1.moment(x1);
    RVector p2 = f2.moment(x2);

    FWResult res;
    int it = 0;
    for (;; ++it) {
      const RVector d = p1 - p2;
      const double dd = d.squaredNorm();
      if (cfg.record_trace) res.objective_trace.push_back(0.5 * dd);

      // Linear minimization oracle: bottom eigenvectors of the two gradients.
      const auto lmo1 = min_eigpair(f1.combine(d));
      const auto lmo2 = min_eigpair(f2.combine(-d));
      const RVector s1 = f1.moment_of_vector(lmo1.vector);
      const RVector s2 = f2.moment_of_vector(lmo2.vector);
      const RVector dir = (s1 - s2) - d;
      res.gap = std::max(0.0, -d.dot(dir));

      const double dist = std::sqrt(dd);
      double lower = 0;
      if (dist > 0) {
        lower = std::max((dd - res.gap) / dist, std::sqrt(std::max(0.0, dd - 2 * res.gap)));
      }
      res.lower_bound = std::max(res.lower_bound, std::max(0.0, lower));

      const bool optimal = res.gap <= cfg.gap_tol;
      bool done = optimal;
      if (stop_when_decided) {
        done = (optimal && dist <= cfg.dist_tol) || res.lower_bound > cfg.dist_tol;
      }
      if (done) {
        res.converged = true;
        break;
      }
      if (it == cfg.max_iter) break;

      const double dir2 = dir.squaredNorm();
      if (dir2 <= 0) {
        res.converged = true;
        break;
      }
      const double gamma = std::clamp(-d.dot(dir) / dir2, 0.0, 1.0);
      x1 = (1 - gamma) * x1 + gamma * (lmo1.vector * lmo1.vector.adjoint());
      x2 = (1 - gamma) * x2 + gamma * (lmo2.vector * lmo2.vector.adjoint());
      p1 = (1 - gamma) * p1 + gamma * s1;
      p2 = (1 - gamma) * p2 + gamma * s2;
    }

    res.iterations = it;
    res.witness_plus = to_density(x1);
    res.witness_minus = to_density(x2);
    res.point_plus = f1.moment(res.witness_plus.matrix());
    res.point_minus = f2.moment(res.witness_minus.matrix());
    res.distance = (res.point_plus - res.point_minus).norm();
    return res;
  }

  static DensityMatrix to_density(const CMatrix& x) {
    CMatrix y = 0.5 * (x + x.adjoint());
    y /= y.trace().real();
    return DensityMatrix(HermitianMatrix::symmetrize(y));
  }
};

}  // namespace

FWResult moment_distance(const CompressedFamily& f1, const CompressedFamily& f2, const FWConfig& cfg) {
  return FrankWolfe{f1, f2, cfg, false}.run();
}

FWResult moment_distance(const Subspace& s1, const Subspace& s2, const SubalgebraBasis& basis,
                         const FWConfig& cfg) {
  if (s1.n() != s2.n()) throw Error(ErrorCode::DimensionMismatch, "moment_distance: ambient dimensions differ");
  return moment_distance(compress_family(s1, basis), compress_family(s2, basis), cfg);
}

IntersectionResult decide_intersection(const CompressedFamily& f1, const CompressedFamily& f2,
                                       const FWConfig& cfg) {
  IntersectionResult out;
  out.fw = FrankWolfe{f1, f2, cfg, true}.run();
  if (out.fw.distance <= cfg.dist_tol && out.fw.gap <= cfg.gap_tol) {
    out.verdict = Intersection::Yes;
  } else if (out.fw.lower_bound > cfg.dist_tol) {
    out.verdict = Intersection::No;
  } else {
    out.verdict = Intersection::Undecided;
  }
  return out;
}

bool intersects(const Subspace& s1, const Subspace& s2, const SubalgebraBasis& basis, const FWConfig& cfg) {
  if (s1.n() != s2.n()) throw Error(ErrorCode::DimensionMismatch, "intersects: ambient dimensions differ");
  const auto res = decide_intersection(compress_family(s1, basis), compress_family(s2, basis), cfg);
  if (res.verdict == Intersection::Undecided) {
    throw Error(ErrorCode::Undecided, "intersects: Frank-Wolfe gap cannot separate distance from tolerance");
  }
  return res.verdict == Intersection::Yes;
}

}  // namespace bmin
