#include <doctest.h>

#include <cmath>
#include <complex>

#include "qsep/rng.hpp"
#include "qsep/scenarios.hpp"

using namespace qsep;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

int count_symbolic(const std::vector<CatalogEntry>& cat,
                   const std::string& sym) {
  int n = 0;
  for (const auto& e : cat)
    if (e.total_target && e.total_target->symbolic == sym) ++n;
  return n;
}
}  // namespace

TEST_CASE("scenario dimensions and names") {
  ScenarioSpec s;
  s.zeroed_mask = (1u << Z23) | (1u << Z24);
  CHECK(s.dimension() == 5);
  CHECK(s.zeroed_names() == "z23,z24");
  s.diag_mode = DiagMode::FullReal9d;
  CHECK(s.dimension() == 9);
}

TEST_CASE("catalog census") {
  SUBCASE("dimension 3") {
    const auto cat = enumerate_scenarios(3);
    CHECK(cat.size() == 15);
    CHECK(count_symbolic(cat, "pi^2/128") == 8);
    CHECK(count_symbolic(cat, "pi/48") == 4);
    CHECK(count_symbolic(cat, "1/12") == 3);
    for (const auto& e : cat) CHECK(e.cls == ScenarioClass::TrivialProbOne);
  }
  SUBCASE("dimension 4") {
    const auto cat = enumerate_scenarios(4);
    CHECK(cat.size() == 20);
    int trivial = 0, a = 0, b = 0;
    for (const auto& e : cat) {
      if (e.cls == ScenarioClass::TrivialProbOne) ++trivial;
      if (e.quoted_probability) {
        if (e.quoted_probability->symbolic == "(4+pi^2)/(4 pi^2)") ++a;
        if (e.quoted_probability->symbolic == "3(4+pi^2)/(32 pi)") ++b;
      }
    }
    CHECK(trivial == 12);
    CHECK(a == 4);
    CHECK(b == 4);
  }
  SUBCASE("dimension 5") {
    const auto cat = enumerate_scenarios(5);
    CHECK(cat.size() == 15);
    int trivial = 0;
    for (const auto& e : cat)
      if (e.cls == ScenarioClass::TrivialProbOne) ++trivial;
    CHECK(trivial == 3);
    CHECK(count_symbolic(cat, "pi^2/1440") == 7);
    CHECK(count_symbolic(cat, "pi^3/4096") == 8);
  }
  CHECK_THROWS_AS(enumerate_scenarios(6), std::invalid_argument);
}

TEST_CASE("restricted scenario estimates hit their closed forms") {
  // 4-d scenario; the verified probability carries the extra half-ball term
  // 4/(3 pi) on top of the quoted (4+pi^2)/(4 pi^2)
  ScenarioSpec s{(1u << Z12) | (1u << Z23) | (1u << Z24),
                 DiagMode::Restricted, ConstraintLevel::FullySeparable};
  const auto r = evaluate_scenario(s, 400000, 17);
  const double pi2 = kPi * kPi;
  CHECK(std::abs(r.total.est.value - pi2 / 384.0) <
        4.0 * r.total.est.stderr_);
  const double expected = 4.0 / (3.0 * kPi) + (4.0 + pi2) / (4.0 * pi2);
  CHECK(std::abs(r.probability.est.value - expected) <
        4.0 * r.probability.est.stderr_);
}

TEST_CASE("4-d separability probability agrees with the eigenvalue oracle") {
  // direct Peres-Horodecki check on the z12=z23=z24=0 slice
  CounterRng rng(41, 0);
  std::uint64_t feas = 0, sep = 0;
  for (int i = 0; i < 60000; ++i) {
    ZVec z{0, 0, 0, 0, 0, 0};
    z[Z13] = rng.uniform(-1, 1);
    z[Z14] = rng.uniform(-1, 1);
    z[Z34] = rng.uniform(-1, 1);
    BlooreCoords c{RestrictedDiag{rng.uniform(0.01, 0.49)}.expand(), z};
    const Eigen::MatrixXcd rho =
        bloore_compose(c).cast<std::complex<double>>();
    if (min_eigenvalue(rho) < -kPsdTol) continue;
    ++feas;
    if (is_separable(rho, 2, 2)) ++sep;
  }
  const double p = static_cast<double>(sep) / static_cast<double>(feas);
  const double expected =
      4.0 / (3.0 * kPi) + (4.0 + kPi * kPi) / (4.0 * kPi * kPi);
  CHECK(std::abs(p - expected) <
        4.0 * std::sqrt(expected * (1 - expected) / feas));
}

TEST_CASE("B = D scenarios have separable equal to total exactly") {
  ScenarioSpec s{(1u << Z13) | (1u << Z24), DiagMode::Restricted,
                 ConstraintLevel::FullySeparable};
  const auto r = evaluate_scenario(s, 200000, 23);
  CHECK(r.separable.est.value == r.total.est.value);
  CHECK(r.probability.est.value == 1.0);
}

TEST_CASE("upper bounds are bounds at matched seeds") {
  ScenarioSpec total{0, DiagMode::Restricted, ConstraintLevel::FeasibleOnly};
  ScenarioSpec bound{0, DiagMode::Restricted, ConstraintLevel::One3x3PtMinor};
  ScenarioSpec sep{0, DiagMode::Restricted, ConstraintLevel::FullySeparable};
  const std::uint64_t n = 200000, seed = 31;
  const double v0 = evaluate_scenario(total, n, seed).total.est.value;
  const double v1 = upper_bound_run(bound, n, seed).separable.est.value;
  const double v2 = evaluate_scenario(sep, n, seed).separable.est.value;
  CHECK(v0 >= v1);
  CHECK(v1 >= v2);
  CHECK_THROWS_AS(upper_bound_run(sep, n, seed), std::invalid_argument);
}

TEST_CASE("nine-dimensional routes agree") {
  const std::uint64_t n = 400000, seed = 37;
  ScenarioSpec s{0, DiagMode::FullReal9d, ConstraintLevel::FeasibleOnly};
  const auto box = evaluate_scenario(s, n, seed);
  const auto cad = nine_d_feasible_via_cad(n, seed + 1);
  const double target = std::pow(kPi, 4) / 60480.0;
  CHECK(std::abs(box.total.est.value - target) < 4.0 * box.total.est.stderr_);
  CHECK(std::abs(cad.value - target) < 4.0 * cad.stderr_);
  CHECK(std::abs(box.total.est.value - cad.value) <
        5.0 * std::hypot(box.total.est.stderr_, cad.stderr_));

  ScenarioSpec b{0, DiagMode::FullReal9d, ConstraintLevel::One2x2PtMinor};
  const auto rb = upper_bound_run(b, n, seed);
  CHECK(rb.separable.est.value < box.total.est.value);
  CHECK(rb.expected_probability.has_value());
  CHECK(rb.expected_probability->value == doctest::Approx(0.88426997055));
}
