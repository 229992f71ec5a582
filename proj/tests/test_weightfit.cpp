#include <doctest.h>

#include <cmath>

#include "qsep/integrate.hpp"
#include "qsep/rng.hpp"
#include "qsep/weightfit.hpp"

using namespace qsep;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

TEST_CASE("eval_W") {
  const WeightingForm w = eq_single_power_form();
  SUBCASE("vanishes on pure states") {
    const double l[4] = {1.0, 0.0, 0.0, 0.0};
    CHECK(eval_W(w, l) == 0.0);
  }
  SUBCASE("maximally mixed value") {
    const double l[4] = {0.25, 0.25, 0.25, 0.25};
    CHECK(eval_W(w, l) ==
          doctest::Approx(6086.0 * std::pow(16.0, -53.0 / 20.0))
              .epsilon(1e-13));
  }
  SUBCASE("face reduction to 6086 (l1 l2 l3)^{53/20}") {
    CounterRng rng(5, 0);
    for (int i = 0; i < 10000; ++i) {
      double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
      const double s = a + b + c;
      a /= s;
      b /= s;
      c /= s;
      const double l[4] = {a, b, c, 0.0};
      const double direct = 6086.0 * std::pow(a * b * c, 53.0 / 20.0);
      CHECK(eval_W(w, l) == doctest::Approx(direct).epsilon(1e-13));
    }
  }
  SUBCASE("exact permutation invariance") {
    const double base[4] = {0.4, 0.3, 0.2, 0.1};
    const double ref = eval_W(w, base);
    int perm[4] = {0, 1, 2, 3};
    do {
      double l[4];
      for (int i = 0; i < 4; ++i) l[i] = base[perm[i]];
      CHECK(eval_W(w, l) == ref);
    } while (std::next_permutation(perm, perm + 4));
  }
}

TEST_CASE("two-term fit reproduces the closed-form coefficients") {
  const auto fit = fit_two_term(3, 3);
  const double s3 = std::sqrt(3.0), p6 = std::pow(kPi, 6);
  CHECK(fit.a ==
        doctest::Approx(325909584.0 / 464375.0 * s3 / p6).epsilon(1e-7));
  CHECK(fit.b ==
        doctest::Approx(5070990172248.0 / 464375.0 * s3 / p6).epsilon(1e-7));
  CHECK(fit.b / fit.a == doctest::Approx(31119.0 / 2.0).epsilon(1e-7));

  const auto fit43 = fit_two_term(4, 3);
  CHECK(fit43.b / fit43.a == doctest::Approx(11377.0 / 3.0).epsilon(1e-7));
  CHECK_THROWS_AS(fit_two_term(0, 3), std::invalid_argument);
}

TEST_CASE("fitted forms re-integrate to the targets") {
  const auto fit = fit_two_term(3, 3);
  // tight quadrature: both targets back to eight digits
  QuadratureSpec sv{3, 1e-11, 6};
  const double haar = std::pow(kPi, 6) / 96.0;
  const double vol =
      haar * quad_simplex_value(
                 [&](std::span<const double> l) {
                   return eval_W(fit.form, l) *
                          simplex_density(MetricKind::HS, l);
                 },
                 sv);
  CHECK(vol == doctest::Approx(std::pow(5.0 * std::sqrt(3.0), -7.0))
                   .epsilon(1e-8));
  QuadratureSpec sa{2, 1e-11, 6};
  const double area =
      haar * quad_simplex_value(
                 [&](std::span<const double> l) {
                   const double l4[4] = {l[0], l[1], l[2], 0.0};
                   const std::span<const double> ls(l4, 4);
                   return eval_W(fit.form, ls) *
                          face_density(MetricKind::HS, ls);
                 },
                 sa);
  CHECK(area == doctest::Approx(1.0 / 140625.0).epsilon(1e-8));
}

TEST_CASE("single-power form self-consistency on the HS metric") {
  const auto p = predict(eq_single_power_form(), MetricKind::HS, "volume");
  REQUIRE(p.conjectured.has_value());
  CHECK(p.ratio == doctest::Approx(1.0).epsilon(5e-4));
}

TEST_CASE("blend") {
  const WeightingForm f1 = eq_single_power_form();
  const WeightingForm f2 = WeightingForm::two_term(1.0, 3, 2.0, 3);
  SUBCASE("unit weight is the identity") {
    const std::pair<WeightingForm, double> parts[2] = {{f1, 1.0}, {f2, 0.0}};
    const WeightingForm b = blend(parts);
    const double l[4] = {0.4, 0.3, 0.2, 0.1};
    CHECK(eval_W(b, l) == eval_W(f1, l));
  }
  SUBCASE("pointwise convex combination") {
    const std::pair<WeightingForm, double> parts[2] = {{f1, 0.3}, {f2, 0.7}};
    const WeightingForm b = blend(parts);
    const double l[4] = {0.35, 0.3, 0.25, 0.1};
    CHECK(eval_W(b, l) ==
          doctest::Approx(0.3 * eval_W(f1, l) + 0.7 * eval_W(f2, l))
              .epsilon(1e-15));
  }
  SUBCASE("weight-sum violation") {
    const std::pair<WeightingForm, double> parts[2] = {{f1, 0.5}, {f2, 0.6}};
    CHECK_THROWS_AS(blend(parts), std::invalid_argument);
  }
}

TEST_CASE("schur classification") {
  SUBCASE("zero-valued boundary pair is not a witness") {
    const WeightingForm w = eq_single_power_form();
    const double p[4] = {0.5, 0.5, 0.0, 0.0};
    const double q[4] = {1.0, 0.0, 0.0, 0.0};
    CHECK(eval_W(w, p) == 0.0);
    CHECK(eval_W(w, q) == 0.0);
  }
  SUBCASE("e3 power form shows concave evidence only") {
    const auto rep = schur_classify(eq_single_power_form(), 20000, 13);
    CHECK(rep.cls == SchurReport::Class::ConcaveEvidence);
    CHECK(rep.convex_violations > 0);
    CHECK(rep.concave_violations == 0);
    CHECK(!rep.witnesses.empty());
  }
  SUBCASE("positive two-term forms are Schur-concave as well") {
    // elementary symmetric polynomials are Schur-concave; positive powers
    // and positive combinations preserve that
    const auto rep = schur_classify(WeightingForm::two_term(1.3, 3, 19673.0, 3),
                                    20000, 13);
    CHECK(rep.cls == SchurReport::Class::ConcaveEvidence);
  }
  SUBCASE("constant form is flat") {
    const auto rep =
        schur_classify(WeightingForm::single_power_e3(5.0, 0.0), 5000, 13);
    CHECK(rep.cls == SchurReport::Class::DegenerateFlat);
  }
}

TEST_CASE("flat-core diagnostic") {
  const auto d = flat_core_diagnostic(eq_single_power_form());
  CHECK(d.center ==
        doctest::Approx(6086.0 * std::pow(16.0, -53.0 / 20.0)).epsilon(1e-12));
  CHECK(d.min >= 0.0);
  CHECK(d.max >= d.center);
  CHECK(d.rel_variation > 0.0);
}
