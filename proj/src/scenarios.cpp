#include "qsep/scenarios.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qsep/detail/chunks.hpp"
#include "qsep/rng.hpp"

namespace qsep {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

const char* kZNames[6] = {"z12", "z13", "z14", "z23", "z24", "z34"};

// dual pairs whose simultaneous vanishing forces B == D
constexpr unsigned kDualMasks[3] = {(1u << Z12) | (1u << Z34),
                                    (1u << Z13) | (1u << Z24),
                                    (1u << Z14) | (1u << Z23)};

bool contains_dual_pair(unsigned mask) {
  for (unsigned d : kDualMasks)
    if ((mask & d) == d) return true;
  return false;
}

/// Analytic rho11 factor of a restricted scenario: the product of Bloore
/// scale factors over the free z's, integrated over rho11 in [0, 1/2].
/// Pair (1,2) contributes x, (3,4) contributes (1/2 - x), cross pairs
/// sqrt(x (1/2 - x)).
double restricted_diag_integral(unsigned zeroed_mask) {
  double a = 0.0, b = 0.0;
  for (int i = 0; i < 6; ++i) {
    if (zeroed_mask & (1u << i)) continue;
    if (i == Z12)
      a += 1.0;
    else if (i == Z34)
      b += 1.0;
    else {
      a += 0.5;
      b += 0.5;
    }
  }
  return std::beta(a + 1.0, b + 1.0) * std::pow(0.5, a + b + 1.0);
}

bool z_feasible(const ZVec& z) {
  return factor_B(z) >= 0.0 && minor123_z(z) >= 0.0;
}

bool z_level(const ZVec& z, ConstraintLevel level) {
  switch (level) {
    case ConstraintLevel::FeasibleOnly:
      return true;
    case ConstraintLevel::One2x2PtMinor:
      // restricted diagonal: rho22 rho33 - rho14^2 factors to 1 - z14^2 >= 0,
      // already implied by the box
      return std::abs(z[Z14]) <= 1.0;
    case ConstraintLevel::One3x3PtMinor:
      return minor234_pt_z(z) >= 0.0;
    case ConstraintLevel::FullySeparable:
      return factor_D(z) >= 0.0;
  }
  return false;
}

struct Counts {
  std::uint64_t feas = 0, pass = 0;
};

struct WeightedSums {
  double st = 0, ss = 0, st2 = 0, ss2 = 0, sts = 0;
};

Estimate binomial_estimate(std::uint64_t hits, std::uint64_t n, double scale,
                           std::uint64_t seed) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  Estimate e;
  e.value = scale * p;
  e.stderr_ = scale * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  e.n_samples = n;
  e.seed = seed;
  return e;
}

}  // namespace

const char* constraint_name(ConstraintLevel c) {
  switch (c) {
    case ConstraintLevel::FeasibleOnly: return "feasible";
    case ConstraintLevel::One2x2PtMinor: return "one-2x2-pt-minor";
    case ConstraintLevel::One3x3PtMinor: return "one-3x3-pt-minor";
    case ConstraintLevel::FullySeparable: return "separable";
  }
  return "?";
}

std::optional<ConstraintLevel> constraint_from_name(std::string_view name) {
  if (name == "feasible") return ConstraintLevel::FeasibleOnly;
  if (name == "one-2x2-pt-minor") return ConstraintLevel::One2x2PtMinor;
  if (name == "one-3x3-pt-minor") return ConstraintLevel::One3x3PtMinor;
  if (name == "separable") return ConstraintLevel::FullySeparable;
  return std::nullopt;
}

int ScenarioSpec::dimension() const {
  if (diag_mode == DiagMode::FullReal9d) return 9;
  return 7 - std::popcount(zeroed_mask);
}

std::string ScenarioSpec::zeroed_names() const {
  std::string s;
  for (int i = 0; i < 6; ++i)
    if (zeroed_mask & (1u << i)) {
      if (!s.empty()) s += ",";
      s += kZNames[i];
    }
  return s;
}

std::vector<CatalogEntry> enumerate_scenarios(int dimension) {
  if (dimension < 3 || dimension > 5)
    throw std::invalid_argument("enumerate_scenarios: dimension must be 3..5");
  const int n_zeroed = 7 - dimension;
  std::vector<CatalogEntry> out;
  for (unsigned mask = 0; mask < 64; ++mask) {
    if (std::popcount(mask) != n_zeroed) continue;
    CatalogEntry e;
    e.spec.zeroed_mask = mask;
    e.spec.diag_mode = DiagMode::Restricted;
    e.spec.level = ConstraintLevel::FullySeparable;
    const bool trivial = contains_dual_pair(mask);
    e.cls = trivial ? ScenarioClass::TrivialProbOne : ScenarioClass::Nontrivial;
    if (trivial) e.probability_target = ExactTarget{"1", 1.0};

    const unsigned free_mask = ~mask & 0x3fu;
    const bool f12 = free_mask & (1u << Z12);
    const bool f34 = free_mask & (1u << Z34);

    if (dimension == 3) {
      // two free variables
      if ((f12 && f34) || (!f12 && !f34 && contains_dual_pair(free_mask))) {
        e.total_target = ExactTarget{"1/12", 1.0 / 12.0};
      } else if (!f12 && !f34) {
        e.total_target = ExactTarget{"pi/48", kPi / 48.0};
      } else {
        e.total_target = ExactTarget{"pi^2/128", kPi * kPi / 128.0};
      }
    } else if (dimension == 4) {
      // the two nontrivial orbits carry the closed forms
      static const unsigned orbitA[4] = {
          (1u << Z12) | (1u << Z23) | (1u << Z24),
          (1u << Z12) | (1u << Z13) | (1u << Z14),
          (1u << Z34) | (1u << Z14) | (1u << Z24),
          (1u << Z34) | (1u << Z13) | (1u << Z23)};
      static const unsigned orbitB[4] = {
          (1u << Z23) | (1u << Z24) | (1u << Z34),
          (1u << Z13) | (1u << Z14) | (1u << Z34),
          (1u << Z12) | (1u << Z14) | (1u << Z24),
          (1u << Z12) | (1u << Z13) | (1u << Z23)};
      if (std::find(std::begin(orbitA), std::end(orbitA), mask) !=
          std::end(orbitA)) {
        e.total_target = ExactTarget{"pi^2/384", kPi * kPi / 384.0};
        e.probability_target =
            ExactTarget{"4/(3 pi) + (4+pi^2)/(4 pi^2)",
                        4.0 / (3.0 * kPi) +
                            (4.0 + kPi * kPi) / (4.0 * kPi * kPi)};
        e.quoted_probability =
            ExactTarget{"(4+pi^2)/(4 pi^2)",
                        (4.0 + kPi * kPi) / (4.0 * kPi * kPi)};
      } else if (std::find(std::begin(orbitB), std::end(orbitB), mask) !=
                 std::end(orbitB)) {
        e.total_target = ExactTarget{"pi/144", kPi / 144.0};
        e.probability_target =
            ExactTarget{"1/2 + 3(4+pi^2)/(32 pi)",
                        0.5 + 3.0 * (4.0 + kPi * kPi) / (32.0 * kPi)};
        e.quoted_probability =
            ExactTarget{"3(4+pi^2)/(32 pi)",
                        3.0 * (4.0 + kPi * kPi) / (32.0 * kPi)};
      }
    } else {
      // dimension 5: totals split by whether z12 or z34 is among the zeroed
      if (mask & ((1u << Z12) | (1u << Z34))) {
        if (trivial)  // {z12,z34} itself
          e.total_target = ExactTarget{"pi^2/1440", kPi * kPi / 1440.0};
        else
          e.total_target = ExactTarget{"pi^3/4096", std::pow(kPi, 3) / 4096.0};
      } else {
        e.total_target = ExactTarget{"pi^2/1440", kPi * kPi / 1440.0};
      }
      if (!trivial)
        e.probability_target = ExactTarget{"0.776643", 0.776643};
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

ScenarioResult evaluate_restricted(const ScenarioSpec& spec, std::uint64_t n,
                                   std::uint64_t seed) {
  std::array<int, 6> free_idx{};
  int k = 0;
  for (int i = 0; i < 6; ++i)
    if (!(spec.zeroed_mask & (1u << i))) free_idx[k++] = i;

  constexpr std::uint64_t kChunk = 1 << 18;
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
  auto work = [&](std::uint64_t c) {
    Counts acc;
    const std::uint64_t beg = c * kChunk;
    const std::uint64_t end = std::min(n, beg + kChunk);
    for (std::uint64_t i = beg; i < end; ++i) {
      CounterRng rng(seed, i);
      ZVec z{0, 0, 0, 0, 0, 0};
      for (int d = 0; d < k; ++d) z[free_idx[d]] = rng.uniform(-1.0, 1.0);
      if (!z_feasible(z)) continue;
      ++acc.feas;
      if (z_level(z, spec.level)) ++acc.pass;
    }
    return acc;
  };
  const auto partials =
      detail::run_chunks<Counts>(n_chunks, integration_threads(), work);
  Counts tot;
  for (const auto& p : partials) {
    tot.feas += p.feas;
    tot.pass += p.pass;
  }

  const double scale =
      restricted_diag_integral(spec.zeroed_mask) * std::pow(2.0, k);
  ScenarioResult r;
  r.total.est = binomial_estimate(tot.feas, n, scale, seed);
  r.separable.est = binomial_estimate(tot.pass, n, scale, seed);
  const double p = tot.feas
                       ? static_cast<double>(tot.pass) /
                             static_cast<double>(tot.feas)
                       : 0.0;
  r.probability.est.value = p;
  r.probability.est.stderr_ =
      tot.feas ? std::sqrt(p * (1.0 - p) / static_cast<double>(tot.feas))
               : 0.0;
  r.probability.est.n_samples = tot.feas;
  r.probability.est.seed = seed;
  return r;
}

ScenarioResult evaluate_full9d(const ScenarioSpec& spec, std::uint64_t n,
                               std::uint64_t seed) {
  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;

  auto work = [&](std::uint64_t c) {
    WeightedSums acc;
    const std::uint64_t beg = c * kChunk;
    const std::uint64_t end = std::min(n, beg + kChunk);
    for (std::uint64_t i = beg; i < end; ++i) {
      CounterRng rng(seed, i);
      double d[4], sum = 0.0;
      for (double& v : d) {
        v = -std::log(rng.uniform());
        sum += v;
      }
      for (double& v : d) v /= sum;  // Dirichlet(1,1,1,1)
      ZVec z;
      for (double& v : z) v = rng.uniform(-1.0, 1.0);
      if (!z_feasible(z)) continue;
      const double w =
          std::sqrt(d[0] * d[1] * d[2] * d[3]) * (d[0] * d[1] * d[2] * d[3]);
      bool pass = false;
      switch (spec.level) {
        case ConstraintLevel::FeasibleOnly:
          pass = true;
          break;
        case ConstraintLevel::One2x2PtMinor:
          pass = d[1] * d[2] - d[0] * d[3] * z[Z14] * z[Z14] >= 0.0;
          break;
        case ConstraintLevel::One3x3PtMinor: {
          // minor {2,3,4} of rho_PT with the full diagonal
          const double r14 = std::sqrt(d[0] * d[3]) * z[Z14];  // lands at (2,3)
          const double r24 = std::sqrt(d[1] * d[3]) * z[Z24];
          const double r34 = std::sqrt(d[2] * d[3]) * z[Z34];
          pass = d[1] * d[2] * d[3] + 2.0 * r14 * r24 * r34 -
                     d[3] * r14 * r14 - d[2] * r24 * r24 - d[1] * r34 * r34 >=
                 0.0;
          break;
        }
        case ConstraintLevel::FullySeparable: {
          BlooreCoords bc{{d[0], d[1], d[2], d[3]}, z};
          pass = is_separable(
              bloore_compose(bc).cast<std::complex<double>>(), 2, 2);
          break;
        }
      }
      acc.st += w;
      acc.st2 += w * w;
      if (pass) {
        acc.ss += w;
        acc.ss2 += w * w;
        acc.sts += w * w;
      }
    }
    return acc;
  };
  const auto partials =
      detail::run_chunks<WeightedSums>(n_chunks, integration_threads(), work);
  WeightedSums s;
  for (const auto& p : partials) {
    s.st += p.st;
    s.ss += p.ss;
    s.st2 += p.st2;
    s.ss2 += p.ss2;
    s.sts += p.sts;
  }
  const double nn = static_cast<double>(n);
  // V = 16 * vol(simplex chart) * vol(box) * E[w * ind] = (512/3) E[w ind]
  const double scale = 512.0 / 3.0;
  const double mt = s.st / nn, ms = s.ss / nn;
  const double vt = std::max(0.0, s.st2 / nn - mt * mt);
  const double vs = std::max(0.0, s.ss2 / nn - ms * ms);
  const double cst = s.sts / nn - mt * ms;

  ScenarioResult r;
  r.total.est = {scale * mt, scale * std::sqrt(vt / nn), n, seed};
  r.separable.est = {scale * ms, scale * std::sqrt(vs / nn), n, seed};
  const double ratio = mt > 0.0 ? ms / mt : 0.0;
  // delta method for the ratio of correlated means
  const double rvar =
      mt > 0.0
          ? (vs - 2.0 * ratio * cst + ratio * ratio * vt) / (mt * mt * nn)
          : 0.0;
  r.probability.est = {ratio, std::sqrt(std::max(0.0, rvar)), n, seed};
  return r;
}

}  // namespace

ScenarioResult evaluate_scenario(const ScenarioSpec& spec, std::uint64_t n,
                                 std::uint64_t seed) {
  if (n < 1000) throw std::invalid_argument("evaluate_scenario: n too small");
  if (spec.diag_mode == DiagMode::FullReal9d)
    return evaluate_full9d(spec, n, seed);
  return evaluate_restricted(spec, n, seed);
}

ScenarioResult upper_bound_run(const ScenarioSpec& spec, std::uint64_t n,
                               std::uint64_t seed) {
  if (spec.level == ConstraintLevel::FullySeparable)
    throw std::invalid_argument(
        "upper_bound_run: constraint level must be a strict subset of the "
        "partial-transpose minors");
  ScenarioResult r = evaluate_scenario(spec, n, seed);
  if (spec.diag_mode == DiagMode::Restricted && spec.zeroed_mask == 0 &&
      spec.level == ConstraintLevel::One3x3PtMinor) {
    r.expected_probability =
        ExactTarget{"45 pi^2/512", 45.0 * kPi * kPi / 512.0};
  } else if (spec.diag_mode == DiagMode::FullReal9d &&
             spec.level == ConstraintLevel::One2x2PtMinor) {
    r.expected_probability = ExactTarget{"0.88426997055", 0.88426997055};
  }
  return r;
}

Estimate nine_d_feasible_via_cad(std::uint64_t n, std::uint64_t seed) {
  constexpr std::uint64_t kChunk = 1 << 18;
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
  auto work = [&](std::uint64_t c) {
    WeightedSums acc;
    const std::uint64_t beg = c * kChunk;
    const std::uint64_t end = std::min(n, beg + kChunk);
    for (std::uint64_t i = beg; i < end; ++i) {
      CounterRng rng(seed, i);
      const double z12 = rng.uniform(-1.0, 1.0);
      const double z13 = rng.uniform(-1.0, 1.0);
      const double z14 = rng.uniform(-1.0, 1.0);
      CadLimits lim = cad_limits(z12, z13, z14, 0.0, 0.0);
      const double z23 = rng.uniform(lim.z23.lo, lim.z23.hi);
      const double z24 = rng.uniform(lim.z24.lo, lim.z24.hi);
      lim = cad_limits(z12, z13, z14, z23, z24);
      const double v =
          lim.z23.length() * lim.z24.length() * lim.z34.length();
      acc.st += v;
      acc.st2 += v * v;
    }
    return acc;
  };
  const auto partials =
      detail::run_chunks<WeightedSums>(n_chunks, integration_threads(), work);
  WeightedSums s;
  for (const auto& p : partials) {
    s.st += p.st;
    s.st2 += p.st2;
  }
  const double nn = static_cast<double>(n);
  // V = 16 * int_{simplex} (prod rho)^{3/2} * E[8 * prod interval lengths]
  const double diag = kPi * kPi / 1146880.0;
  const double scale = 16.0 * diag * 8.0;
  const double m = s.st / nn;
  const double var = std::max(0.0, s.st2 / nn - m * m);
  return {scale * m, scale * std::sqrt(var / nn), n, seed};
}

}  // namespace qsep
