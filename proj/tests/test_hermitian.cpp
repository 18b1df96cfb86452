#include <doctest.h>

#include "support.hpp"

using namespace bmin;
using bmin::testing::Rng;

namespace {

double reconstruction_residual(const HermitianMatrix& a, const EigenDecomposition& d) {
  const CMatrix& v = d.vectors;
  return (v * d.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint() - a.matrix()).norm();
}

double unitarity_residual(const EigenDecomposition& d) {
  const Eigen::Index n = d.vectors.cols();
  return (d.vectors.adjoint() * d.vectors - CMatrix::Identity(n, n)).norm();
}

}  // namespace

TEST_CASE("hermitian matrix construction checks symmetry") {
  CMatrix m(2, 2);
  m << 1.0, Complex(0, 1), Complex(0, -1), 2.0;
  const HermitianMatrix h(m);
  CHECK(h.n() == 2);
  CHECK(h(0, 1) == Complex(0, 1));

  m(1, 0) = Complex(0, -1.001);
  CHECK_THROWS_AS(HermitianMatrix{m}, Error);

  CMatrix nonsquare(2, 3);
  nonsquare.setZero();
  CHECK_THROWS_AS(HermitianMatrix{nonsquare}, Error);

  CMatrix nan = CMatrix::Zero(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(HermitianMatrix{nan}, Error);

  CMatrix imag_diag = CMatrix::Zero(2, 2);
  imag_diag(0, 0) = Complex(1, 0.5);
  CHECK_THROWS_AS(HermitianMatrix{imag_diag}, Error);

  // Rounding-level asymmetry is averaged away.
  CMatrix near = CMatrix::Zero(2, 2);
  near(0, 1) = 1.0;
  near(1, 0) = 1.0 + 1e-14;
  const HermitianMatrix avg(near);
  CHECK(avg(0, 1) == avg(1, 0));
}

TEST_CASE("error codes carry their names") {
  try {
    throw Error(ErrorCode::NormNotTwoSided, "x");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NormNotTwoSided);
    CHECK(to_string(e.code()) == "NormNotTwoSided");
  }
}

TEST_CASE("eigendecomposition of small known matrices") {
  SUBCASE("2x2 swap") {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    const auto d = eig_hermitian(HermitianMatrix(m));
    CHECK(d.eigenvalues[0] == doctest::Approx(-1).epsilon(1e-14));
    CHECK(d.eigenvalues[1] == doctest::Approx(1).epsilon(1e-14));
    CHECK(d.residual <= 1e-12);
  }
  SUBCASE("1x1") {
    const auto d = eig_hermitian(HermitianMatrix::diagonal(RVector::Constant(1, -3.5)));
    CHECK(d.eigenvalues[0] == -3.5);
    CHECK(std::abs(d.vectors(0, 0) - Complex(1, 0)) < 1e-15);
  }
  SUBCASE("zero matrix") {
    const auto d = eig_hermitian(HermitianMatrix::zero(4));
    CHECK(d.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
    CHECK(unitarity_residual(d) <= 1e-15);
  }
  SUBCASE("diag(1, -1, 0) sorted ascending") {
    RVector v(3);
    v << 1, -1, 0;
    const auto d = eig_hermitian(HermitianMatrix::diagonal(v));
    CHECK(d.eigenvalues[0] == -1);
    CHECK(d.eigenvalues[1] == 0);
    CHECK(d.eigenvalues[2] == 1);
  }
  SUBCASE("complex Pauli Y") {
    CMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    const HermitianMatrix y(m);
    const auto d = eig_hermitian(y);
    CHECK(d.eigenvalues[0] == doctest::Approx(-1));
    CHECK(d.eigenvalues[1] == doctest::Approx(1));
    CHECK(reconstruction_residual(y, d) <= 1e-14);
  }
}

TEST_CASE("eigensolver agrees with an independent solver on random matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 1 + trial % 12;
    const HermitianMatrix a = rng.hermitian(n);
    const auto d = eig_hermitian(a);
    const auto oracle = testing::oracle_eigenvalues(a);
    CHECK((d.eigenvalues - oracle).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, oracle.cwiseAbs().maxCoeff()));
    CHECK(reconstruction_residual(a, d) <= 1e-10);
    CHECK(unitarity_residual(d) <= 1e-10);
    for (Eigen::Index i = 1; i < n; ++i) CHECK(d.eigenvalues[i - 1] <= d.eigenvalues[i]);
  }
}

TEST_CASE("eigenvector phase convention") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = eig_hermitian(rng.hermitian(5));
    for (Eigen::Index j = 0; j < 5; ++j) {
      Eigen::Index imax = 0;
      d.vectors.col(j).cwiseAbs().maxCoeff(&imax);
      CHECK(std::abs(d.vectors(imax, j).imag()) <= 1e-14);
      CHECK(d.vectors(imax, j).real() > 0);
    }
  }
}

TEST_CASE("eigendecomposition is deterministic") {
  Rng rng(13);
  const HermitianMatrix a = rng.hermitian(7);
  const auto d1 = eig_hermitian(a);
  const auto d2 = eig_hermitian(a);
  CHECK(d1.eigenvalues == d2.eigenvalues);
  CHECK(d1.vectors == d2.vectors);
}

TEST_CASE("eigenvalues are unitarily invariant") {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianMatrix a = rng.hermitian(6);
    const CMatrix u = rng.unitary(6);
    const HermitianMatrix b = HermitianMatrix::symmetrize(u * a.matrix() * u.adjoint());
    CHECK((eig_hermitian(a).eigenvalues - eig_hermitian(b).eigenvalues).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("clusters follow the tolerance") {
  RVector v(5);
  v << -1, -1 + 1e-10, 0.3, 1 - 1e-11, 1;
  const auto d = eig_hermitian(HermitianMatrix::diagonal(v));
  const auto clusters = cluster_eigenvalues(d, 1e-8);
  REQUIRE(clusters.size() == 3);
  CHECK(clusters[0].multiplicity == 2);
  CHECK(clusters[1].multiplicity == 1);
  CHECK(clusters[2].multiplicity == 2);
  CHECK(clusters[2].frame.rank() == 2);
  // Frames are orthonormal and span eigenvectors of the cluster.
  const CMatrix& q = clusters[0].frame.frame();
  CHECK((q.adjoint() * q - CMatrix::Identity(2, 2)).norm() <= 1e-12);
  CHECK(cluster_eigenvalues(d, 1e-12).size() == 5);
  CHECK_THROWS_AS(cluster_eigenvalues(d, -1.0), Error);
}

TEST_CASE("spectral norm and absolute value") {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix a = rng.hermitian(4);
    CHECK(spectral_norm(a) == doctest::Approx(testing::oracle_norm(a.matrix())).epsilon(1e-12));
    const HermitianMatrix abs = abs_hermitian(a);
    CHECK((abs.matrix() * abs.matrix() - a.matrix() * a.matrix()).norm() <= 1e-10);
    CHECK(testing::oracle_eigenvalues(abs).minCoeff() >= -1e-12);
  }
  CHECK(spectral_norm(HermitianMatrix::zero(3)) == 0);
}

TEST_CASE("subspace spans and projectors") {
  CMatrix cols(3, 2);
  cols << 1, 0, 1, 0, 0, 2;
  const Subspace s = Subspace::span(cols);
  CHECK(s.rank() == 2);
  const HermitianMatrix p = s.projector();
  CHECK((p.matrix() * p.matrix() - p.matrix()).norm() <= 1e-14);
  CHECK(p.trace() == doctest::Approx(2));

  CMatrix dependent(3, 2);
  dependent << 1, 2, 1, 2, 0, 0;
  CHECK_THROWS_AS(Subspace::span(dependent), Error);

  CMatrix not_orthonormal(2, 1);
  not_orthonormal << 1, 1;
  CHECK_THROWS_AS(Subspace{not_orthonormal}, Error);
}

TEST_CASE("density matrices") {
  const auto mixed = DensityMatrix::maximally_mixed(4);
  CHECK(mixed.hermitian().trace() == doctest::Approx(1));
  CVector v(2);
  v << Complex(3, 0), Complex(0, 4);
  const auto pure = DensityMatrix::pure(v);
  CHECK(pure.matrix()(0, 0).real() == doctest::Approx(9.0 / 25));
  CHECK(pure.matrix()(1, 1).real() == doctest::Approx(16.0 / 25));

  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::identity(2)), Error);  // trace 2
  RVector neg(2);
  neg << 1.5, -0.5;
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::diagonal(neg)), Error);
  CHECK_THROWS_AS(DensityMatrix::pure(CVector::Zero(3)), Error);
}

TEST_CASE("simplex projection against a brute-force oracle") {
  RVector v(3);
  v << 0.2, 0.3, 0.5;
  CHECK((project_simplex(v) - v).norm() <= 1e-15);
  v << 2, 0, 0;
  RVector e1 = RVector::Zero(3);
  e1[0] = 1;
  CHECK((project_simplex(v) - e1).norm() <= 1e-15);

  // Dense grid over the 2-simplex: the projection is the nearest grid point
  // up to grid resolution.
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    RVector x = 2 * rng.rvector(3);
    const RVector p = project_simplex(x);
    CHECK(p.minCoeff() >= 0);
    CHECK(p.sum() == doctest::Approx(1).epsilon(1e-14));
    double best = std::numeric_limits<double>::infinity();
    const int k = 400;
    for (int i = 0; i <= k; ++i)
      for (int j = 0; i + j <= k; ++j) {
        RVector g(3);
        g << double(i) / k, double(j) / k, double(k - i - j) / k;
        best = std::min(best, (g - x).norm());
      }
    CHECK((p - x).norm() <= best + 1e-12);
    CHECK((p - x).norm() >= best - 2.0 / k);
  }
}

TEST_CASE("density projection is idempotent and nonexpansive") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix a = rng.hermitian(4);
    const HermitianMatrix b = rng.hermitian(4);
    const DensityMatrix pa = project_density(a);
    const DensityMatrix pb = project_density(b);
    CHECK((project_density(pa.hermitian()).matrix() - pa.matrix()).norm() <= 1e-10);
    CHECK((pa.matrix() - pb.matrix()).norm() <= (a.matrix() - b.matrix()).norm() + 1e-10);
    CHECK(pa.hermitian().trace() == doctest::Approx(1));
    CHECK(testing::oracle_eigenvalues(pa.hermitian()).minCoeff() >= -1e-12);
  }
}

TEST_CASE("extreme eigenpairs") {
  RVector v(3);
  v << 2, -3, 1;
  const HermitianMatrix a = HermitianMatrix::diagonal(v);
  CHECK(lambda_max(a) == 2);
  CHECK(lambda_min(a) == -3);
  const auto top = max_eigpair(a);
  CHECK(std::abs(top.vector[0]) == doctest::Approx(1));
  const auto bottom = min_eigpair(a);
  CHECK(std::abs(bottom.vector[1]) == doctest::Approx(1));
}
