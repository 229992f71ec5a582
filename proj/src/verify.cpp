#include "qsep/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qsep/core.hpp"
#include "qsep/detail/chunks.hpp"
#include "qsep/integrate.hpp"
#include "qsep/measures.hpp"
#include "qsep/oracle_moments.hpp"
#include "qsep/rng.hpp"
#include "qsep/scenarios.hpp"
#include "qsep/weightfit.hpp"

namespace qsep {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

class Runner {
 public:
  Runner(VerifyReport& rep, std::ostream* live) : rep_(rep), live_(live) {}

  void emit(const std::string& id, bool pass, const std::string& detail,
            bool hard = true) {
    rep_.results.push_back({id, detail, pass, hard});
    if (live_)
      *live_ << (pass ? "[PASS] " : "[FAIL] ") << id << ": " << detail
             << (hard ? "" : "  (informational)") << std::endl;
  }

  /// got vs expected within max(3 sigma, rel_floor * |expected|)
  void check_mc(const std::string& id, const Estimate& got, double expected,
                const std::string& symbolic, double sigmas = 3.0,
                double rel_floor = 0.005) {
    const double tol =
        std::max(sigmas * got.stderr_, rel_floor * std::abs(expected));
    const bool ok = std::abs(got.value - expected) <= tol;
    std::ostringstream os;
    os << std::setprecision(8) << got.value << " +- " << got.stderr_
       << " vs " << symbolic << " = " << expected << " (tol " << tol << ")";
    emit(id, ok, os.str());
  }

  void check_rel(const std::string& id, double got, double expected,
                 double rel_tol, const std::string& label) {
    const bool ok =
        std::abs(got - expected) <= rel_tol * std::abs(expected);
    std::ostringstream os;
    os << std::setprecision(10) << got << " vs " << label << " = " << expected
       << " (rel tol " << rel_tol << ")";
    emit(id, ok, os.str());
  }

  void info(const std::string& id, const std::string& detail) {
    emit(id, true, detail, false);
  }

 private:
  VerifyReport& rep_;
  std::ostream* live_;
};

std::string fmt(double v, int prec = 8) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

// --- criterion 1 ------------------------------------------------------------

void criterion1(Runner& run, const VerifyOptions& opt) {
  double max_err = 0.0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    CounterRng rng(opt.seed, i);
    ZVec z;
    for (double& v : z) v = rng.uniform(-1.0, 1.0);
    const double lhs = factor_B(z) - factor_D(z);
    const double rhs = -2.0 * (z[Z14] - z[Z23]) * (z[Z13] - z[Z24]) *
                       (z[Z12] - z[Z34]);
    max_err = std::max(max_err, std::abs(lhs - rhs));
  }
  run.emit("C1.factor-identity", max_err < 1e-12,
           "max |B - D + 2(z14-z23)(z13-z24)(z12-z34)| = " + fmt(max_err, 3) +
               " on 1e5 draws (< 1e-12)");
}

// --- criterion 2 ------------------------------------------------------------

void criterion2(Runner& run, const VerifyOptions& opt) {
  const std::uint64_t n = opt.mc_samples;
  const double pi2 = kPi * kPi;

  // 7-d restricted
  {
    ScenarioSpec s{0, DiagMode::Restricted, ConstraintLevel::FeasibleOnly};
    const auto r = evaluate_scenario(s, n, opt.seed + 101);
    run.check_mc("C2.7d-total", r.total.est, pi2 / 15120.0, "pi^2/15120");
    ScenarioSpec b{0, DiagMode::Restricted, ConstraintLevel::One3x3PtMinor};
    const auto rb = upper_bound_run(b, n, opt.seed + 102);
    run.check_mc("C2.7d-3x3pt-bound", rb.separable.est,
                 std::pow(kPi, 4) / 172032.0, "pi^4/172032");
    run.check_mc("C2.7d-3x3pt-prob-bound", rb.probability.est,
                 45.0 * pi2 / 512.0, "45 pi^2/512");
  }

  // 4-d scenarios. The quoted closed forms (4+pi^2)/(4 pi^2) and
  // 3(4+pi^2)/(32 pi) omit the half-ball region where only the
  // partial-transpose determinant constraint is active: the eigenvalue-level
  // oracle gives probabilities larger by exactly 4/(3 pi) resp. 1/2. Both
  // rows are emitted: the as-quoted check fails against a correct
  // Peres-Horodecki evaluation and is retained deliberately; the corrected
  // closed forms pass and are cross-checked by the direct oracle.
  {
    ScenarioSpec a{(1u << Z12) | (1u << Z23) | (1u << Z24),
                   DiagMode::Restricted, ConstraintLevel::FullySeparable};
    const auto ra = evaluate_scenario(a, n, opt.seed + 103);
    run.check_mc("C2.4d-probA-as-quoted", ra.probability.est,
                 (4.0 + pi2) / (4.0 * pi2), "(4+pi^2)/(4 pi^2)");
    run.check_mc("C2.4d-probA-corrected", ra.probability.est,
                 4.0 / (3.0 * kPi) + (4.0 + pi2) / (4.0 * pi2),
                 "4/(3 pi) + (4+pi^2)/(4 pi^2)");
    run.check_mc("C2.4d-totalA", ra.total.est, pi2 / 384.0, "pi^2/384");
    ScenarioSpec bspec{(1u << Z23) | (1u << Z24) | (1u << Z34),
                       DiagMode::Restricted, ConstraintLevel::FullySeparable};
    const auto rb = evaluate_scenario(bspec, n, opt.seed + 104);
    run.check_mc("C2.4d-probB-as-quoted", rb.probability.est,
                 3.0 * (4.0 + pi2) / (32.0 * kPi), "3(4+pi^2)/(32 pi)");
    run.check_mc("C2.4d-probB-corrected", rb.probability.est,
                 0.5 + 3.0 * (4.0 + pi2) / (32.0 * kPi),
                 "1/2 + 3(4+pi^2)/(32 pi)");
    const auto cat = enumerate_scenarios(4);
    int trivial = 0, classA = 0, classB = 0;
    for (const auto& e : cat) {
      if (e.cls == ScenarioClass::TrivialProbOne)
        ++trivial;
      else if (e.quoted_probability &&
               e.quoted_probability->symbolic == "(4+pi^2)/(4 pi^2)")
        ++classA;
      else if (e.quoted_probability)
        ++classB;
    }
    run.emit("C2.4d-census",
             cat.size() == 20 && trivial == 12 && classA == 4 && classB == 4,
             "20 scenarios: " + std::to_string(classA) + "+" +
                 std::to_string(classB) + " nontrivial, " +
                 std::to_string(trivial) + " trivial");
  }

  // 5-d scenarios
  {
    ScenarioSpec s{(1u << Z23) | (1u << Z24), DiagMode::Restricted,
                   ConstraintLevel::FullySeparable};
    const auto r = evaluate_scenario(s, n, opt.seed + 105);
    run.check_mc("C2.5d-total", r.total.est, pi2 / 1440.0, "pi^2/1440");
    run.check_mc("C2.5d-sep-volume", r.separable.est, 0.00532303,
                 "0.00532303");
    run.check_mc("C2.5d-probability", r.probability.est, 0.776643,
                 "0.776643");
    // the other 5-d diagonal class (one of z12/z34 zeroed): total pi^3/4096
    ScenarioSpec s2{(1u << Z12) | (1u << Z13), DiagMode::Restricted,
                    ConstraintLevel::FullySeparable};
    const auto r2 = evaluate_scenario(s2, n, opt.seed + 111);
    run.check_mc("C2.5d-total-z12-class", r2.total.est,
                 std::pow(kPi, 3) / 4096.0, "pi^3/4096");
    ScenarioSpec dual{(1u << Z14) | (1u << Z23), DiagMode::Restricted,
                      ConstraintLevel::FullySeparable};
    const auto rd = evaluate_scenario(dual, n, opt.seed + 106);
    const double diff = std::abs(rd.separable.est.value - rd.total.est.value);
    const double tol = 3.0 * std::hypot(rd.separable.est.stderr_,
                                        rd.total.est.stderr_) +
                       1e-12;
    run.emit("C2.5d-BeqD-prob-1", diff <= tol,
             "|sep - total| = " + fmt(diff, 3) + " (B = D scenario, tol " +
                 fmt(tol, 3) + ")");
  }

  // 3-d scenarios: all fifteen, counts 8/4/3, probability 1
  {
    const auto cat = enumerate_scenarios(3);
    int c128 = 0, c48 = 0, c12 = 0;
    bool totals_ok = true, probs_ok = true;
    for (const auto& e : cat) {
      if (e.total_target->symbolic == "pi^2/128") ++c128;
      if (e.total_target->symbolic == "pi/48") ++c48;
      if (e.total_target->symbolic == "1/12") ++c12;
      const auto r = evaluate_scenario(e.spec, n, opt.seed + 107);
      const double tol = std::max(3.0 * r.total.est.stderr_,
                                  0.005 * e.total_target->value);
      if (std::abs(r.total.est.value - e.total_target->value) > tol)
        totals_ok = false;
      if (std::abs(r.separable.est.value - r.total.est.value) >
          3.0 * std::hypot(r.separable.est.stderr_, r.total.est.stderr_) +
              1e-12)
        probs_ok = false;
    }
    run.emit("C2.3d-census", cat.size() == 15 && c128 == 8 && c48 == 4 &&
                                 c12 == 3,
             "15 scenarios; totals pi^2/128 x" + std::to_string(c128) +
                 ", pi/48 x" + std::to_string(c48) + ", 1/12 x" +
                 std::to_string(c12));
    run.emit("C2.3d-totals", totals_ok, "all 15 totals match closed forms");
    run.emit("C2.3d-prob-1", probs_ok, "all 15 probabilities equal 1");
  }

  // 9-d real
  {
    const double v9 = std::pow(kPi, 4) / 60480.0;
    ScenarioSpec s{0, DiagMode::FullReal9d, ConstraintLevel::FeasibleOnly};
    const auto r = evaluate_scenario(s, n, opt.seed + 108);
    run.check_mc("C2.9d-total-implicit", r.total.est, v9, "pi^4/60480");
    const auto rc = nine_d_feasible_via_cad(n, opt.seed + 109);
    run.check_mc("C2.9d-total-cad", rc, v9, "pi^4/60480");
    const double diff = std::abs(r.total.est.value - rc.value);
    const double tol =
        4.0 * std::hypot(r.total.est.stderr_, rc.stderr_);
    run.emit("C2.9d-route-agreement", diff <= tol,
             "|implicit - cad| = " + fmt(diff, 3) + " <= 4 sigma = " +
                 fmt(tol, 3));
    ScenarioSpec b{0, DiagMode::FullReal9d, ConstraintLevel::One2x2PtMinor};
    const auto rb = upper_bound_run(b, n, opt.seed + 110);
    run.check_mc("C2.9d-2x2pt-bound", rb.separable.est, 0.0014242052589,
                 "0.0014242052589");
    run.check_mc("C2.9d-2x2pt-prob-bound", rb.probability.est, 0.88426997055,
                 "0.88426997055");
  }
}

// --- criterion 3 ------------------------------------------------------------

void criterion3(Runner& run) {
  const double haar = haar_box_integral();
  run.check_rel("C3.haar-integral", haar, std::pow(kPi, 6) / 96.0, 1e-6,
                "pi^6/96");

  QuadratureSpec spec{3, 1e-9, 6};
  const double ib = quad_simplex_value(
      [](std::span<const double> l) {
        return simplex_density(MetricKind::Bures, l);
      },
      spec);
  run.check_rel("C3.bures-total", haar_const4() * ib,
                constant(MetricKind::Bures, "2x2", "total-volume")->value,
                1e-6, "pi^8/(2^15 7!)");
  const double ih = quad_simplex_value(
      [](std::span<const double> l) {
        return simplex_density(MetricKind::HS, l);
      },
      spec);
  run.check_rel("C3.hs-total", haar_const4() * ih,
                constant(MetricKind::HS, "2x2", "total-volume")->value, 1e-6,
                "pi^6/851350500");
}

// --- criterion 4 ------------------------------------------------------------

Estimate sampled_sep_probability(MetricKind m, int dim, int dA, int dB,
                                 std::uint64_t n, std::uint64_t seed) {
  constexpr std::uint64_t kChunk = 1 << 14;
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
  auto work = [&](std::uint64_t c) {
    std::uint64_t hits = 0;
    const std::uint64_t beg = c * kChunk;
    const std::uint64_t end = std::min(n, beg + kChunk);
    for (std::uint64_t i = beg; i < end; ++i) {
      CounterRng rng(seed, i);
      const Eigen::MatrixXcd rho = sample_state(m, dim, rng);
      if (is_separable(rho, dA, dB)) ++hits;
    }
    return hits;
  };
  const auto partials =
      detail::run_chunks<std::uint64_t>(n_chunks, integration_threads(), work);
  std::uint64_t hits = 0;
  for (auto h : partials) hits += h;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, seed};
}

void criterion4(Runner& run, const VerifyOptions& opt) {
  const auto hs = sampled_sep_probability(MetricKind::HS, 4, 2, 2,
                                          opt.sampler_samples, opt.seed + 201);
  run.check_mc("C4.hs-sep-probability", hs,
               constant(MetricKind::HS, "2x2", "sep-probability")->value,
               "0.242379", 4.0, 0.01);
  const auto bu =
      sampled_sep_probability(MetricKind::Bures, 4, 2, 2, opt.sampler_samples,
                              opt.seed + 202);
  run.check_mc("C4.bures-sep-probability", bu,
               constant(MetricKind::Bures, "2x2", "sep-probability")->value,
               "0.0733389", 4.0, 0.01);
  run.info("C4.boundary-ratio",
           "rank-deficient direct sampling out of scope; hyperarea-based fit "
           "consistency (C5) stands in");
}

// --- criterion 5 ------------------------------------------------------------

void criterion5(Runner& run) {
  const WeightingForm w11 = eq_single_power_form();

  const auto hv = predict(w11, MetricKind::HS, "volume");
  run.check_rel("C5.e3form-hs-volume", hv.ratio, 1.0, 5e-4,
                "1 (reproduces (5 sqrt3)^-7)");
  const auto ha = predict(w11, MetricKind::HS, "hyperarea");
  run.check_rel("C5.e3form-hs-hyperarea", ha.ratio, 1.0, 5e-4,
                "1 (reproduces (3^2 5^6)^-1)");

  // two-term fits against the closed-form coefficients
  const double s3 = std::sqrt(3.0);
  const double p6 = std::pow(kPi, 6);
  {
    const auto fit = fit_two_term(3, 3);
    run.check_rel("C5.fit33-a", fit.a, 325909584.0 / 464375.0 * s3 / p6, 1e-6,
                  "325909584 sqrt(3)/(464375 pi^6) ~ 1.26422");
    run.check_rel("C5.fit33-b", fit.b, 5070990172248.0 / 464375.0 * s3 / p6,
                  1e-6, "5070990172248 sqrt(3)/(464375 pi^6) ~ 19673.7");
    run.check_rel("C5.fit33-b-over-a", fit.b / fit.a, 31119.0 / 2.0, 1e-6,
                  "31119/2");
  }
  {
    const auto fit = fit_two_term(4, 3);
    run.check_rel("C5.fit43-a", fit.a, 8834477652.0 / 3109375.0 * s3 / p6,
                  1e-6, "8834477652 sqrt(3)/(3109375 pi^6) ~ 5.11881");
    run.check_rel("C5.fit43-b", fit.b, 33503284082268.0 / 3109375.0 * s3 / p6,
                  1e-6, "33503284082268 sqrt(3)/(3109375 pi^6) ~ 19412.2");
    run.check_rel("C5.fit43-b-over-a", fit.b / fit.a, 11377.0 / 3.0, 1e-6,
                  "11377/3");
  }

  // prediction ratios of the e3^(53/20) form
  struct Row {
    MetricKind m;
    const char* q;
    double paper;
    const char* id;
  };
  const Row rows[5] = {
      {MetricKind::Bures, "volume", 0.938275, "C5.e3form-bures-volume"},
      {MetricKind::KuboMori, "volume", 0.910768, "C5.e3form-km-volume"},
      {MetricKind::AvgMonotone, "volume", 0.903281, "C5.e3form-avg-volume"},
      {MetricKind::WignerYanase, "volume", 0.919585, "C5.e3form-wy-volume"},
      {MetricKind::Bures, "hyperarea", 0.940364, "C5.e3form-bures-hyperarea"},
  };
  for (const auto& r : rows) {
    const auto p = predict(w11, r.m, r.q);
    run.check_rel(r.id, p.ratio, r.paper, 0.005, "ratio");
  }

  // Kubo-Mori hyperarea + boundary probability (self-consistency report)
  {
    const auto pa = predict(w11, MetricKind::KuboMori, "hyperarea");
    QuadratureSpec spec{2, 1e-8, 6};
    const double atot =
        haar_const4() *
        quad_simplex_value(
            [](std::span<const double> l) {
              const double l4[4] = {l[0], l[1], l[2], 0.0};
              return face_density(MetricKind::KuboMori,
                                  std::span<const double>(l4, 4));
            },
            spec);
    run.info("C5.km-hyperarea-report",
             "sep hyperarea " + fmt(pa.predicted) + " (paper 3.99861e-05), "
             "boundary sep probability " + fmt(pa.predicted / atot) +
                 " (paper 0.0214689); c_KM(x,0) := 2/x convention");
  }

  // both fits: all five non-HS indicators within 5 % (plus quadrature slack)
  const auto fit33 = fit_two_term(3, 3);
  const auto fit43 = fit_two_term(4, 3);
  auto max_dev = [&](const WeightingForm& f, std::string& detail) {
    double mx = 0.0;
    std::ostringstream os;
    os << std::setprecision(6);
    for (const auto& r : rows) {
      const auto p = predict(f, r.m, r.q);
      os << metric_name(r.m) << "-" << r.q << " " << p.ratio << " ";
      mx = std::max(mx, std::abs(p.ratio - 1.0));
    }
    detail = os.str();
    return mx;
  };
  {
    std::string d;
    const double mx = max_dev(fit33.form, d);
    run.emit("C5.fit33-indicators", mx <= 0.05 + 1e-4,
             "max |ratio - 1| = " + fmt(mx, 4) + " <= 5%  [" + d + "]");
  }
  {
    std::string d;
    const double mx = max_dev(fit43.form, d);
    run.emit("C5.fit43-indicators", mx <= 0.05 + 1e-4,
             "max |ratio - 1| = " + fmt(mx, 4) + " <= 5%  [" + d + "]");
  }
  {
    const std::pair<WeightingForm, double> parts[2] = {{fit33.form, 0.570347},
                                                       {fit43.form, 0.429653}};
    const WeightingForm bl = blend(parts);
    std::string d;
    const double mx = max_dev(bl, d);
    run.emit("C5.blend-indicators", mx <= 0.0361 + 0.005,
             "max |ratio - 1| = " + fmt(mx, 4) + " <= 3.61% + 0.5%  [" + d +
                 "]");
    // blends inherit the exact HS fit
    const auto bv = predict(bl, MetricKind::HS, "volume");
    const auto ba = predict(bl, MetricKind::HS, "hyperarea");
    run.emit("C5.blend-hs-exact",
             std::abs(bv.ratio - 1.0) < 1e-5 && std::abs(ba.ratio - 1.0) < 1e-5,
             "blend HS volume ratio " + fmt(bv.ratio, 10) + ", hyperarea " +
                 fmt(ba.ratio, 10));
  }

  // average-metric hyperarea: reported, excluded from hard acceptance
  {
    const auto p = predict(w11, MetricKind::AvgMonotone, "hyperarea");
    run.info("C5.avg-hyperarea-report",
             "predicted " + fmt(p.predicted) + ", conjectured " +
                 fmt(p.conjectured.value_or(0.0)) + " (erratum-corrected), "
                 "ratio " + fmt(p.ratio, 6) +
                 " (paper-scale estimate 0.738784/0.825191 = 0.895289)");
  }
}

// --- criterion 6 ------------------------------------------------------------

void criterion6(Runner& run) {
  const auto fit = fit_qutrit();
  run.check_rel("C6.qutrit-constant", fit.c, 986304.0, 0.01, "986304");
  run.check_rel("C6.qutrit-hs-hyperarea", fit.hs_hyperarea_ratio, 1.0, 0.015,
                "1 (reproduces (2^46 3 5^12)^-1)");
  const auto bv = predict(fit.form, MetricKind::Bures, "volume");
  run.check_rel("C6.qutrit-bures-volume-ratio", bv.ratio, 1.82587, 0.02,
                "1.82587");
  const auto ba = predict(fit.form, MetricKind::Bures, "hyperarea");
  run.check_rel("C6.qutrit-bures-hyperarea-ratio", ba.ratio, 1.91223, 0.02,
                "1.91223");
}

// --- criterion 7 ------------------------------------------------------------

void criterion7(Runner& run, const VerifyOptions& opt, bool mc_part) {
  if (!mc_part) {
    // exact permutation invariance
    {
      const double base4[4] = {0.4, 0.3, 0.2, 0.1};
      const WeightingForm w11 = eq_single_power_form();
      const WeightingForm w2 = WeightingForm::two_term(1.26422, 3, 19673.7, 3);
      bool ok = true;
      int perm[4] = {0, 1, 2, 3};
      const double refw = eval_W(w11, base4);
      const double refw2 = eval_W(w2, base4);
      const double refh = simplex_density(MetricKind::HS, base4);
      const double refb = simplex_density(MetricKind::Bures, base4);
      do {
        double l[4];
        for (int i = 0; i < 4; ++i) l[i] = base4[perm[i]];
        ok = ok && eval_W(w11, l) == refw && eval_W(w2, l) == refw2 &&
             simplex_density(MetricKind::HS, l) == refh &&
             simplex_density(MetricKind::Bures, l) == refb;
      } while (std::next_permutation(perm, perm + 4));
      // n = 6 and a face point
      const double base6[6] = {0.3, 0.25, 0.2, 0.15, 0.07, 0.03};
      const WeightingForm w5 = WeightingForm::single_power_e5(986304.0, 1.8);
      const double refw5 = eval_W(w5, base6);
      const double refh6 = simplex_density(MetricKind::HS, base6);
      int perm6[6] = {0, 1, 2, 3, 4, 5};
      do {
        double l[6];
        for (int i = 0; i < 6; ++i) l[i] = base6[perm6[i]];
        ok = ok && eval_W(w5, l) == refw5 &&
             simplex_density(MetricKind::HS, l) == refh6;
      } while (std::next_permutation(perm6, perm6 + 6));
      const double face[4] = {0.5, 0.3, 0.2, 0.0};
      const double reff = face_density(MetricKind::Bures, face);
      const double facep[4] = {0.2, 0.0, 0.5, 0.3};
      ok = ok && face_density(MetricKind::Bures, facep) == reff;
      run.emit("C7.permutation-invariance", ok,
               "bitwise equal over all 24 (n=4) and 720 (n=6) permutations");
    }

    // moment integrals vs the exact rational oracle, 10 digits
    {
      using oracle::Poly4;
      const Poly4 delta = Poly4::squared_vandermonde();
      bool ok = true;
      std::ostringstream os;
      os << std::setprecision(3);
      for (int m = 1; m <= 4; ++m) {
        for (int k = 2; k <= 3; ++k) {
          const Poly4 p = Poly4::elementary(k).pow(m) * delta;
          const double exact_v = oracle::to_double(p.moment_simplex());
          const double exact_f = oracle::to_double(p.moment_face());
          QuadratureSpec sv{3, 1e-12, 6};
          const double qv = quad_simplex_value(
              [&](std::span<const double> l) {
                double buf[4];
                std::copy(l.begin(), l.end(), buf);
                std::sort(buf, buf + 4, std::greater<double>());
                double e[5] = {1, 0, 0, 0, 0};
                for (double x : buf)
                  for (int j = 4; j >= 1; --j) e[j] += x * e[j - 1];
                return std::pow(e[k], m) *
                       simplex_density(MetricKind::HS, l) / (128.0 / 3.0);
              },
              sv);
          QuadratureSpec sf{2, 1e-12, 6};
          const double qf = quad_simplex_value(
              [&](std::span<const double> l) {
                const double l4[4] = {l[0], l[1], l[2], 0.0};
                double e[5] = {1, 0, 0, 0, 0};
                for (double x : l4)
                  for (int j = 4; j >= 1; --j) e[j] += x * e[j - 1];
                return std::pow(e[k], m) *
                       face_density(MetricKind::HS,
                                    std::span<const double>(l4, 4)) /
                       (256.0 / std::sqrt(3.0));
              },
              sf);
          const double ev = std::abs(qv / exact_v - 1.0);
          const double ef = std::abs(qf / exact_f - 1.0);
          ok = ok && ev < 1e-10 && ef < 1e-10;
          os << "e" << k << "^" << m << ":" << std::max(ev, ef) << " ";
        }
      }
      run.emit("C7.moment-oracle", ok,
               "quadrature vs exact rational moments, rel err " + os.str());
    }
    return;
  }

  // monotonicity under added partial-transpose constraints (matched seeds)
  {
    const std::uint64_t n = std::max<std::uint64_t>(opt.mc_samples / 10, 100000);
    const std::uint64_t seed = opt.seed + 301;
    ScenarioSpec s7{0, DiagMode::Restricted, ConstraintLevel::FeasibleOnly};
    const double v0 = evaluate_scenario(s7, n, seed).total.est.value;
    s7.level = ConstraintLevel::One3x3PtMinor;
    const double v1 = evaluate_scenario(s7, n, seed).separable.est.value;
    s7.level = ConstraintLevel::FullySeparable;
    const double v2 = evaluate_scenario(s7, n, seed).separable.est.value;
    ScenarioSpec s9{0, DiagMode::FullReal9d, ConstraintLevel::FeasibleOnly};
    const double w0 = evaluate_scenario(s9, n, seed).total.est.value;
    s9.level = ConstraintLevel::One2x2PtMinor;
    const double w1 = evaluate_scenario(s9, n, seed).separable.est.value;
    s9.level = ConstraintLevel::FullySeparable;
    const double w2 = evaluate_scenario(s9, n, seed).separable.est.value;
    const bool ok = v0 >= v1 && v1 >= v2 && w0 >= w1 && w1 >= w2;
    run.emit("C7.pt-monotonicity", ok,
             "7d: " + fmt(v0, 6) + " >= " + fmt(v1, 6) + " >= " + fmt(v2, 6) +
                 "; 9d: " + fmt(w0, 6) + " >= " + fmt(w1, 6) + " >= " +
                 fmt(w2, 6));
  }

  // sampler vs quadrature eigenvalue marginal (Kolmogorov-Smirnov)
  {
    const std::uint64_t n =
        std::min<std::uint64_t>(opt.sampler_samples, 1000000);
    // quadrature marginal CDF of a uniformly chosen eigenvalue
    constexpr int kGrid = 801;
    std::vector<double> pdf(kGrid), cdf(kGrid);
    QuadratureSpec spec{2, 1e-9, 6};
    for (int g = 0; g < kGrid; ++g) {
      const double x = static_cast<double>(g) / (kGrid - 1);
      const double rem = 1.0 - x;
      if (rem <= 0.0) {
        pdf[g] = 0.0;
        continue;
      }
      pdf[g] = quad_simplex_value(
                   [&](std::span<const double> l) {
                     const double l4[4] = {x, rem * l[0], rem * l[1],
                                           rem * l[2]};
                     return simplex_density(MetricKind::HS,
                                            std::span<const double>(l4, 4));
                   },
                   spec) *
               rem * rem;
    }
    cdf[0] = 0.0;
    for (int g = 1; g < kGrid; ++g)
      cdf[g] = cdf[g - 1] + 0.5 * (pdf[g - 1] + pdf[g]) / (kGrid - 1);
    for (int g = 0; g < kGrid; ++g) cdf[g] /= cdf[kGrid - 1];

    std::vector<double> eig;
    eig.reserve(4 * n);
    for (std::uint64_t i = 0; i < n; ++i) {
      CounterRng rng(opt.seed + 302, i);
      const Eigen::MatrixXcd rho = sample_state(MetricKind::HS, 4, rng);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
          rho, Eigen::EigenvaluesOnly);
      for (int k = 0; k < 4; ++k) eig.push_back(es.eigenvalues()(k));
    }
    std::sort(eig.begin(), eig.end());
    auto cdf_at = [&](double x) {
      const double t = std::clamp(x, 0.0, 1.0) * (kGrid - 1);
      const int g = std::min(static_cast<int>(t), kGrid - 2);
      const double f = t - g;
      return cdf[g] * (1.0 - f) + cdf[g + 1] * f;
    };
    double ks = 0.0;
    const double m = static_cast<double>(eig.size());
    for (std::size_t i = 0; i < eig.size(); ++i) {
      const double F = cdf_at(eig[i]);
      ks = std::max(ks, std::abs((i + 1) / m - F));
      ks = std::max(ks, std::abs(F - i / m));
    }
    run.emit("C7.sampler-ks", ks < 0.01,
             "HS eigenvalue-marginal KS distance = " + fmt(ks, 4) +
                 " (< 0.01 at " + std::to_string(n) + " samples)");
  }
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& opt, std::ostream* live) {
  VerifyReport rep;
  Runner run(rep, live);
  if (opt.run_exact) criterion1(run, opt);
  if (opt.run_mc) criterion2(run, opt);
  if (opt.run_exact) criterion3(run);
  if (opt.run_mc) criterion4(run, opt);
  if (opt.run_exact) criterion5(run);
  if (opt.run_exact) criterion6(run);
  if (opt.run_exact) criterion7(run, opt, false);
  if (opt.run_mc) criterion7(run, opt, true);
  return rep;
}

}  // namespace qsep
