#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "qsep/core.hpp"
#include "qsep/rng.hpp"

using namespace qsep;

namespace {

ZVec zvec(double z12 = 0, double z13 = 0, double z14 = 0, double z23 = 0,
          double z24 = 0, double z34 = 0) {
  return {z12, z13, z14, z23, z24, z34};
}

ZVec random_z(CounterRng& rng) {
  ZVec z;
  for (double& v : z) v = rng.uniform(-1.0, 1.0);
  return z;
}

}  // namespace

TEST_CASE("factor_B closed-form values") {
  CHECK(factor_B(zvec()) == 1.0);
  CHECK(factor_B(zvec(1.0)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(factor_B(zvec(0.5)) == doctest::Approx(0.75));
}

TEST_CASE("factor_D closed-form values") {
  CHECK(factor_D(zvec()) == 1.0);
  CHECK(factor_D(zvec(0, 0, 1.0)) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("B - D factors into the three dual differences") {
  CounterRng rng(42, 0);
  double max_err = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const ZVec z = random_z(rng);
    const double lhs = factor_B(z) - factor_D(z);
    const double rhs = -2.0 * (z[Z14] - z[Z23]) * (z[Z13] - z[Z24]) *
                       (z[Z12] - z[Z34]);
    max_err = std::max(max_err, std::abs(lhs - rhs));
  }
  CHECK(max_err < 1e-12);
}

TEST_CASE("bloore_compose") {
  SUBCASE("maximally mixed") {
    BlooreCoords c{{0.25, 0.25, 0.25, 0.25}, zvec()};
    CHECK((bloore_compose(c) - 0.25 * Eigen::Matrix4d::Identity()).norm() ==
          0.0);
  }
  SUBCASE("rank-1 boundary projector") {
    BlooreCoords c{{0.5, 0.5, 0.0, 0.0}, zvec(1.0)};
    const Eigen::Matrix4d rho = bloore_compose(c);
    CHECK(rho(0, 1) == doctest::Approx(0.5));
    CHECK(rho.determinant() == doctest::Approx(0.0).epsilon(1e-14));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(rho);
    CHECK(es.eigenvalues()(3) == doctest::Approx(1.0));  // rank one
  }
  SUBCASE("off-diagonal scaling") {
    BlooreCoords c{{0.4, 0.3, 0.2, 0.1}, zvec(0.5)};
    CHECK(bloore_compose(c)(0, 1) ==
          doctest::Approx(0.5 * std::sqrt(0.12)).epsilon(1e-12));
  }
}

TEST_CASE("cad_limits") {
  SUBCASE("zero products give the full interval") {
    const CadLimits lim = cad_limits(0.0, 0.0, 0.3, 0.0, 0.0);
    CHECK(lim.z23.lo == doctest::Approx(-1.0));
    CHECK(lim.z23.hi == doctest::Approx(1.0));
  }
  SUBCASE("degenerate point at the corner") {
    const CadLimits lim = cad_limits(1.0, 1.0, 0.0, 1.0, 0.0);
    CHECK(lim.z23.lo == doctest::Approx(1.0));
    CHECK(lim.z23.hi == doctest::Approx(1.0));
  }
  SUBCASE("direct evaluation") {
    const CadLimits lim = cad_limits(0.3, -0.2, 0.0, 0.0, 0.0);
    const double r = std::sqrt(0.91) * std::sqrt(0.96);
    CHECK(lim.z23.lo == doctest::Approx(-0.06 - r).epsilon(1e-12));
    CHECK(lim.z23.hi == doctest::Approx(-0.06 + r).epsilon(1e-12));
  }
  SUBCASE("out-of-range prefix flags an empty z34 interval") {
    const CadLimits lim = cad_limits(0.9, 0.9, 0.0, -0.9, 0.0);
    CHECK(lim.z34.empty);
    CHECK(lim.z34.length() == 0.0);
  }
  SUBCASE("nested draws stay positive semidefinite") {
    CounterRng rng(7, 0);
    double min_eig = 1.0;
    for (int i = 0; i < 10000; ++i) {
      const double z12 = rng.uniform(-1, 1);
      const double z13 = rng.uniform(-1, 1);
      const double z14 = rng.uniform(-1, 1);
      CadLimits lim = cad_limits(z12, z13, z14, 0, 0);
      const double z23 = rng.uniform(lim.z23.lo, lim.z23.hi);
      const double z24 = rng.uniform(lim.z24.lo, lim.z24.hi);
      lim = cad_limits(z12, z13, z14, z23, z24);
      REQUIRE(!lim.z34.empty);
      const double z34 = rng.uniform(lim.z34.lo, lim.z34.hi);
      double d[4], s = 0;
      for (double& v : d) {
        v = rng.uniform(0.05, 1.0);
        s += v;
      }
      BlooreCoords c{{d[0] / s, d[1] / s, d[2] / s, d[3] / s},
                     zvec(z12, z13, z14, z23, z24, z34)};
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(bloore_compose(c),
                                                        Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, es.eigenvalues()(0));
    }
    CHECK(min_eig >= -kPsdTol);
  }
}

namespace {

Eigen::MatrixXcd bell_projector() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("partial_transpose") {
  const Eigen::MatrixXcd id4 = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  CHECK((partial_transpose(id4, 2, 2) - id4).norm() == 0.0);

  const Eigen::MatrixXcd bell = bell_projector();
  CHECK(min_eigenvalue(partial_transpose(bell, 2, 2)) ==
        doctest::Approx(-0.5).epsilon(1e-12));

  SUBCASE("Werner state at the separability boundary") {
    const double p = 1.0 / 3.0;
    const Eigen::MatrixXcd w =
        p * bell + (1.0 - p) * Eigen::MatrixXcd::Identity(4, 4) / 4.0;
    const Eigen::MatrixXcd pt = partial_transpose(w, 2, 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt);
    double det = 1.0;
    for (int i = 0; i < 4; ++i) det *= es.eigenvalues()(i);
    CHECK(det == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("involution, trace and hermiticity") {
    CounterRng rng(11, 0);
    for (int it = 0; it < 50; ++it) {
      Eigen::MatrixXcd g(6, 6);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          g(i, j) = std::complex<double>(rng.normal(), rng.normal());
      Eigen::MatrixXcd rho = g * g.adjoint();
      rho /= rho.trace().real();
      const Eigen::MatrixXcd pt = partial_transpose(rho, 2, 3);
      CHECK((partial_transpose(pt, 2, 3) - rho).norm() < 1e-14);
      CHECK(std::abs(pt.trace().real() - 1.0) < 1e-14);
      CHECK((pt - pt.adjoint()).norm() < 1e-14);
    }
  }
}

TEST_CASE("is_feasible") {
  CHECK(is_feasible({{0.25, 0.25, 0.25, 0.25}, zvec()}));
  // equal z12 = z13 = z23 keeps the minor at (1-t)^2 (1+2t) >= 0
  CHECK(is_feasible({{0.25, 0.25, 0.25, 0.25}, zvec(0.99, 0.99, 0, 0.99)}));
  // flipping one sign drives the minor far negative
  CHECK(!is_feasible({{0.25, 0.25, 0.25, 0.25}, zvec(0.99, 0.99, 0, -0.99)}));

  SUBCASE("agrees with the eigenvalue oracle") {
    CounterRng rng(101, 0);
    int mismatches = 0;
    for (int i = 0; i < 20000; ++i) {
      ZVec z = random_z(rng);
      double d[4], s = 0;
      for (double& v : d) {
        v = rng.uniform(0.01, 1.0);
        s += v;
      }
      BlooreCoords c{{d[0] / s, d[1] / s, d[2] / s, d[3] / s}, z};
      const bool oracle =
          min_eigenvalue(bloore_compose(c).cast<std::complex<double>>()) >=
          -kPsdTol;
      if (oracle != is_feasible(c)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }

  SUBCASE("degenerate diagonal falls back to the eigen check") {
    CHECK(is_feasible({{0.5, 0.5, 0.0, 0.0}, zvec(1.0)}));
    CHECK(!is_feasible({{0.5, 0.5, 0.0, 0.0}, zvec(1.0000001)}));
  }
}

TEST_CASE("is_separable") {
  const Eigen::MatrixXcd id4 = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  CHECK(is_separable(id4, 2, 2));
  CHECK(!is_separable(bell_projector(), 2, 2));

  SUBCASE("restricted-diagonal states match the sign of D") {
    CounterRng rng(202, 0);
    int mismatches = 0;
    for (int i = 0; i < 20000; ++i) {
      const ZVec z = random_z(rng);
      BlooreCoords c{RestrictedDiag{rng.uniform(0.01, 0.49)}.expand(), z};
      if (!is_feasible(c)) continue;
      const bool sep =
          is_separable(bloore_compose(c).cast<std::complex<double>>(), 2, 2);
      if (sep != (factor_D(z) >= 0.0)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }

  SUBCASE("a vanishing dual difference forces separability") {
    CounterRng rng(303, 0);
    for (int i = 0; i < 2000; ++i) {
      ZVec z = random_z(rng);
      z[Z34] = z[Z12];  // (z12 - z34) factor vanishes
      BlooreCoords c{RestrictedDiag{rng.uniform(0.01, 0.49)}.expand(), z};
      if (!is_feasible(c)) continue;
      CHECK(is_separable(bloore_compose(c).cast<std::complex<double>>(), 2,
                         2));
    }
  }
}
