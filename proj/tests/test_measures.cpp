#include <doctest.h>

#include <cmath>

#include "qsep/core.hpp"
#include "qsep/integrate.hpp"
#include "qsep/measures.hpp"
#include "qsep/rng.hpp"

using namespace qsep;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

TEST_CASE("Morozova-Chentsov functions") {
  for (MetricKind m : {MetricKind::Bures, MetricKind::KuboMori,
                       MetricKind::WignerYanase, MetricKind::AvgMonotone}) {
    // c(x,x) = 1/x for every monotone metric
    CHECK(mc_function(m, 0.3, 0.3) == doctest::Approx(1.0 / 0.3));
  }
  CHECK(mc_function(MetricKind::Bures, 0.5, 0.25) ==
        doctest::Approx(2.0 / 0.75));
  CHECK(mc_function(MetricKind::KuboMori, 0.5, 0.25) ==
        doctest::Approx(std::log(2.0) / 0.25));
  CHECK(mc_function(MetricKind::KuboMori, 0.4, 0.4 * (1 + 1e-13)) ==
        doctest::Approx(2.5).epsilon(1e-9));
  CHECK_THROWS_AS(mc_function(MetricKind::HS, 1, 1), std::domain_error);
}

TEST_CASE("simplex_density values") {
  SUBCASE("HS vanishes on eigenvalue collisions") {
    const double l[4] = {0.25, 0.25, 0.25, 0.25};
    CHECK(simplex_density(MetricKind::HS, l) == 0.0);
  }
  SUBCASE("HS Vandermonde factor at a generic point") {
    const double l[4] = {0.4, 0.3, 0.2, 0.1};
    // squared Vandermonde = (0.1*0.2*0.3*0.1*0.2*0.1)^2 = 1.44e-10
    CHECK(simplex_density(MetricKind::HS, l) ==
          doctest::Approx((128.0 / 3.0) * 1.44e-10).epsilon(1e-12));
  }
  SUBCASE("monotone metrics reject zero eigenvalues") {
    const double l[4] = {0.5, 0.3, 0.2, 0.0};
    CHECK_THROWS_AS(simplex_density(MetricKind::Bures, l), std::domain_error);
  }
}

TEST_CASE("face_density values") {
  SUBCASE("vanishes on collisions") {
    const double l[4] = {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0};
    CHECK(face_density(MetricKind::HS, l) == 0.0);
  }
  SUBCASE("generic point") {
    const double l[4] = {0.5, 0.3, 0.2, 0.0};
    // Delta3^2 (l1 l2 l3)^2 = (0.2*0.3*0.1)^2 * 0.03^2 = 3.24e-8
    CHECK(face_density(MetricKind::HS, l) ==
          doctest::Approx(256.0 / std::sqrt(3.0) * 3.24e-8).epsilon(1e-12));
  }
  SUBCASE("two zero eigenvalues are rejected") {
    const double l[4] = {0.6, 0.4, 0.0, 0.0};
    CHECK_THROWS_AS(face_density(MetricKind::HS, l), std::domain_error);
  }
}

TEST_CASE("haar_density") {
  double a[12];
  for (int k = 0; k < 12; ++k) a[k] = (k % 2 == 1) ? kPi / 4.0 : 0.7;
  a[3] = kPi / 2.0;  // cos^3 factor kills the density
  CHECK(haar_density(std::span<const double, 12>(a, 12)) ==
        doctest::Approx(0.0));
  for (int k = 0; k < 12; ++k) a[k] = (k % 2 == 1) ? kPi / 4.0 : 1.1;
  a[5] = kPi / 2.0;  // cos(alpha6) factor
  CHECK(haar_density(std::span<const double, 12>(a, 12)) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("haar box integral equals pi^6/96") {
  CHECK(haar_box_integral() ==
        doctest::Approx(std::pow(kPi, 6) / 96.0).epsilon(1e-10));
}

TEST_CASE("measure calibration against closed-form totals") {
  QuadratureSpec spec{3, 1e-9, 6};
  const double ih = quad_simplex_value(
      [](std::span<const double> l) {
        return simplex_density(MetricKind::HS, l);
      },
      spec);
  CHECK(haar_const4() * ih ==
        doctest::Approx(std::pow(kPi, 6) / 851350500.0).epsilon(1e-7));
  const double ib = quad_simplex_value(
      [](std::span<const double> l) {
        return simplex_density(MetricKind::Bures, l);
      },
      spec);
  CHECK(haar_const4() * ib ==
        doctest::Approx(std::pow(kPi, 8) / (32768.0 * 5040.0)).epsilon(1e-7));
}

TEST_CASE("constants table") {
  const auto v = constant(MetricKind::HS, "2x2", "sep-volume");
  REQUIRE(v.has_value());
  CHECK(v->value == doctest::Approx(2.73707e-7).epsilon(1e-5));
  const auto a = constant(MetricKind::HS, "2x2", "sep-hyperarea");
  CHECK(a->value == doctest::Approx(7.11111e-6).epsilon(1e-5));
  const auto q = constant(MetricKind::HS, "2x3", "sep-volume");
  CHECK(q->value == doctest::Approx(2.02423e-25).epsilon(1e-5));
  CHECK(!constant(MetricKind::KuboMori, "2x3", "sep-volume").has_value());
  CHECK(constant_table().size() >= 15);
}

TEST_CASE("state samplers") {
  SUBCASE("reproducible streams") {
    CounterRng r1(99, 5), r2(99, 5);
    const Eigen::MatrixXcd a = sample_state(MetricKind::HS, 4, r1);
    const Eigen::MatrixXcd b = sample_state(MetricKind::HS, 4, r2);
    CHECK((a - b).norm() == 0.0);
  }
  SUBCASE("valid density matrices") {
    for (MetricKind m : {MetricKind::HS, MetricKind::Bures}) {
      for (int dim : {4, 6}) {
        CounterRng rng(3, dim);
        for (int it = 0; it < 25; ++it) {
          const Eigen::MatrixXcd rho = sample_state(m, dim, rng);
          CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
          CHECK((rho - rho.adjoint()).norm() < 1e-12);
          CHECK(min_eigenvalue(rho) > -1e-12);
        }
      }
    }
  }
  SUBCASE("separability fractions are in the right neighborhood") {
    int hs_sep = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      CounterRng rng(77, i);
      if (is_separable(sample_state(MetricKind::HS, 4, rng), 2, 2)) ++hs_sep;
    }
    const double p = static_cast<double>(hs_sep) / n;
    CHECK(std::abs(p - 0.242379) < 4.0 * std::sqrt(0.2424 * 0.7576 / n));
  }
  SUBCASE("unsupported requests throw") {
    CounterRng rng(1, 1);
    CHECK_THROWS_AS(sample_state(MetricKind::KuboMori, 4, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_state(MetricKind::HS, 5, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("metric names round-trip") {
  for (MetricKind m : {MetricKind::HS, MetricKind::Bures, MetricKind::KuboMori,
                       MetricKind::WignerYanase, MetricKind::AvgMonotone})
    CHECK(metric_from_name(metric_name(m)) == m);
  CHECK(!metric_from_name("euclidean").has_value());
}
