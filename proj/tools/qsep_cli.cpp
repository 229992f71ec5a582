// Batch command-line interface: separability-probability estimation,
// scenario tables, weighting-function fits and predictions, and the
// verification suite. Every run writes a manifest (arguments, seeds, sample
// counts, results); `replay` re-executes a manifest and reproduces the
// Monte Carlo payload bit for bit.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qsep/core.hpp"
#include "qsep/detail/chunks.hpp"
#include "qsep/integrate.hpp"
#include "qsep/measures.hpp"
#include "qsep/rng.hpp"
#include "qsep/scenarios.hpp"
#include "qsep/verify.hpp"
#include "qsep/weightfit.hpp"

using json = nlohmann::ordered_json;
using namespace qsep;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptanceFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::uint64_t parse_count(const std::string& s) {
  // accepts plain integers and scientific notation ("1e7")
  const double v = std::stod(s);
  if (v < 0 || v > 9.2e18) throw CLI::ValidationError("invalid sample count");
  return static_cast<std::uint64_t>(v);
}

void write_atomic(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::endl;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + tmp);
    os << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename into " + path);
}

json estimate_json(const Estimate& e) {
  return json{{"value", e.value},
              {"stderr", e.stderr_},
              {"n_samples", e.n_samples},
              {"seed", e.seed}};
}

json manifest(const std::vector<std::string>& argv, std::uint64_t seed,
              std::uint64_t samples, double wall_s, json payload) {
  return json{{"schema", "qsep-run/1"},
              {"argv", argv},
              {"seed", seed},
              {"samples", samples},
              {"constant_table_version", constant_table_version()},
              {"wall_time_s", wall_s},
              {"payload", std::move(payload)}};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Estimate sampled_probability(MetricKind m, int dim, int dA, int dB,
                             std::uint64_t n, std::uint64_t seed) {
  constexpr std::uint64_t kChunk = 1 << 14;
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
  auto work = [&](std::uint64_t c) {
    std::uint64_t hits = 0;
    const std::uint64_t beg = c * kChunk;
    const std::uint64_t end = std::min(n, beg + kChunk);
    for (std::uint64_t i = beg; i < end; ++i) {
      CounterRng rng(seed, i);
      if (is_separable(sample_state(m, dim, rng), dA, dB)) ++hits;
    }
    return hits;
  };
  const auto parts =
      detail::run_chunks<std::uint64_t>(n_chunks, integration_threads(), work);
  std::uint64_t hits = 0;
  for (auto h : parts) hits += h;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, seed};
}

// ---------------------------------------------------------------------------

struct CommonArgs {
  std::string out = "-";
  std::uint64_t seed = 0;
  std::string samples = "1e6";
};

int cmd_estimate(const std::vector<std::string>& argv,
                 const std::string& metric, const std::string& system,
                 const std::string& quantity, const CommonArgs& c) {
  const auto m = metric_from_name(metric);
  if (!m) {
    std::cerr << "unknown metric: " << metric << "\n";
    return kExitUsage;
  }
  if (system != "2x2" && system != "2x3") {
    std::cerr << "unknown system: " << system << "\n";
    return kExitUsage;
  }
  const int dim = system == "2x2" ? 4 : 6;
  const int dA = 2, dB = dim / 2;
  const std::uint64_t n = parse_count(c.samples);

  const auto t0 = std::chrono::steady_clock::now();
  json payload;
  payload["metric"] = metric_name(*m);
  payload["system"] = system;
  payload["quantity"] = quantity;

  try {
    if (quantity == "sep-probability" || quantity == "sep-volume") {
      if (*m != MetricKind::HS && *m != MetricKind::Bures) {
        std::cerr << "no sampler for metric " << metric << "\n";
        return kExitUsage;
      }
      if (n < 1000) {
        std::cerr << "need at least 1e3 samples\n";
        return kExitUsage;
      }
      const Estimate p = sampled_probability(*m, dim, dA, dB, n, c.seed);
      if (quantity == "sep-probability") {
        payload["estimate"] = estimate_json(p);
      } else {
        const auto tot = constant(*m, system, "total-volume");
        Estimate v{p.value * tot->value, p.stderr_ * tot->value, n, c.seed};
        payload["estimate"] = estimate_json(v);
        payload["total_volume_used"] = tot->symbolic;
      }
      if (auto conj = constant(*m, system, quantity == "sep-probability"
                                               ? "sep-probability"
                                               : "sep-volume")) {
        payload["conjectured"] = conj->value;
        payload["conjectured_symbolic"] = conj->symbolic;
        const double scale = quantity == "sep-probability"
                                 ? 1.0
                                 : constant(*m, system, "total-volume")->value;
        payload["z_score"] =
            (payload["estimate"]["value"].get<double>() - conj->value) /
            (p.stderr_ * scale);
      }
    } else if (quantity == "total-volume") {
      // deterministic quadrature route; the Kubo-Mori density's logarithmic
      // boundary behavior converges slower than the rest
      const bool smooth =
          *m == MetricKind::HS || *m == MetricKind::Bures;
      double total;
      if (dim == 4) {
        QuadratureSpec spec{3, smooth ? 1e-9 : 3e-6, 6};
        total = haar_const4() *
                quad_simplex_value(
                    [&](std::span<const double> l) {
                      return simplex_density(*m, l);
                    },
                    spec);
      } else {
        QuadratureSpec spec{5, 2e-4, 6};
        total = quad_simplex_value(
            [&](std::span<const double> l) { return simplex_density(*m, l); },
            spec);
      }
      payload["estimate"] = json{{"value", total}, {"stderr", 0.0},
                                 {"n_samples", 0}, {"seed", c.seed}};
      if (auto conj = constant(*m, system, "total-volume")) {
        payload["conjectured"] = conj->value;
        payload["conjectured_symbolic"] = conj->symbolic;
        payload["rel_error"] = total / conj->value - 1.0;
      }
    } else {
      std::cerr << "unknown quantity: " << quantity << "\n";
      return kExitUsage;
    }
  } catch (const QuadBudgetError& e) {
    std::cerr << "numerical budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_atomic(c.out, manifest(argv, c.seed, n, wall, payload).dump(2));
  return kExitOk;
}

int cmd_scenarios(const std::vector<std::string>& argv, int dim,
                  const std::string& constraint, const std::string& format,
                  const CommonArgs& c) {
  const auto level = constraint_from_name(constraint);
  if (!level) {
    std::cerr << "unknown constraint: " << constraint << "\n";
    return kExitUsage;
  }
  const std::uint64_t n = parse_count(c.samples);
  const auto t0 = std::chrono::steady_clock::now();

  json rows = json::array();
  auto add_row = [&](const ScenarioSpec& spec, const ScenarioResult& r,
                     const std::optional<ExactTarget>& total_target,
                     const std::optional<ExactTarget>& prob_target,
                     const char* cls) {
    json row;
    row["zeroed"] = spec.zeroed_names();
    row["diag"] =
        spec.diag_mode == DiagMode::Restricted ? "restricted" : "full-9d";
    row["constraint"] = constraint_name(spec.level);
    row["class"] = cls;
    row["total"] = estimate_json(r.total.est);
    row["volume_at_constraint"] = estimate_json(r.separable.est);
    row["probability"] = estimate_json(r.probability.est);
    if (total_target) {
      row["total_target"] = {{"symbolic", total_target->symbolic},
                             {"value", total_target->value}};
      if (r.total.est.stderr_ > 0)
        row["total_z"] =
            (r.total.est.value - total_target->value) / r.total.est.stderr_;
    }
    if (prob_target) {
      row["probability_target"] = {{"symbolic", prob_target->symbolic},
                                   {"value", prob_target->value}};
      if (r.probability.est.stderr_ > 0)
        row["probability_z"] = (r.probability.est.value - prob_target->value) /
                               r.probability.est.stderr_;
    }
    rows.push_back(std::move(row));
  };

  if (dim >= 3 && dim <= 5) {
    std::uint64_t substream = 0;
    for (const auto& e : enumerate_scenarios(dim)) {
      ScenarioSpec spec = e.spec;
      spec.level = *level;
      const auto r = evaluate_scenario(spec, n, c.seed + 1000 * substream++);
      add_row(spec, r, e.total_target, e.probability_target,
              e.cls == ScenarioClass::TrivialProbOne ? "trivial-prob-1"
                                                     : "nontrivial");
    }
  } else if (dim == 7) {
    ScenarioSpec spec{0, DiagMode::Restricted, *level};
    const auto r = *level == ConstraintLevel::FullySeparable ||
                           *level == ConstraintLevel::FeasibleOnly
                       ? evaluate_scenario(spec, n, c.seed)
                       : upper_bound_run(spec, n, c.seed);
    std::optional<ExactTarget> tt{
        ExactTarget{"pi^2/15120", 9.8696044010893586 / 15120.0}};
    std::optional<ExactTarget> pt;
    if (*level == ConstraintLevel::One3x3PtMinor)
      pt = r.expected_probability;
    add_row(spec, r, tt, pt, "restricted-7d");
  } else if (dim == 9) {
    ScenarioSpec spec{0, DiagMode::FullReal9d, *level};
    const auto r = *level == ConstraintLevel::FullySeparable ||
                           *level == ConstraintLevel::FeasibleOnly
                       ? evaluate_scenario(spec, n, c.seed)
                       : upper_bound_run(spec, n, c.seed);
    std::optional<ExactTarget> tt{
        ExactTarget{"pi^4/60480", 97.409091034002437 / 60480.0}};
    add_row(spec, r, tt, r.expected_probability, "full-real-9d");
    if (*level == ConstraintLevel::FeasibleOnly) {
      const Estimate cad = nine_d_feasible_via_cad(n, c.seed + 1);
      json row;
      row["zeroed"] = "";
      row["diag"] = "full-9d-cad-limits";
      row["constraint"] = "feasible";
      row["class"] = "cross-check";
      row["total"] = estimate_json(cad);
      row["total_target"] = {{"symbolic", "pi^4/60480"},
                             {"value", 97.409091034002437 / 60480.0}};
      rows.push_back(std::move(row));
    }
  } else {
    std::cerr << "dim must be one of 3,4,5,7,9\n";
    return kExitUsage;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  json payload;
  payload["rows"] = rows;

  if (format == "csv") {
    std::ostringstream os;
    os << "zeroed,diag,constraint,class,total,total_stderr,volume,"
          "volume_stderr,probability,probability_stderr,total_target,"
          "probability_target\r\n";
    os.precision(15);
    for (const auto& row : rows) {
      os << csv_escape(row["zeroed"].get<std::string>()) << ","
         << row["diag"].get<std::string>() << ","
         << row["constraint"].get<std::string>() << ","
         << row["class"].get<std::string>() << ",";
      os << row["total"]["value"].get<double>() << ","
         << row["total"]["stderr"].get<double>() << ",";
      if (row.contains("volume_at_constraint"))
        os << row["volume_at_constraint"]["value"].get<double>() << ","
           << row["volume_at_constraint"]["stderr"].get<double>() << ",";
      else
        os << ",,";
      if (row.contains("probability"))
        os << row["probability"]["value"].get<double>() << ","
           << row["probability"]["stderr"].get<double>() << ",";
      else
        os << ",,";
      os << (row.contains("total_target")
                 ? csv_escape(row["total_target"]["symbolic"]
                                  .get<std::string>())
                 : "")
         << ","
         << (row.contains("probability_target")
                 ? csv_escape(row["probability_target"]["symbolic"]
                                  .get<std::string>())
                 : "")
         << "\r\n";
    }
    write_atomic(c.out, os.str());
    return kExitOk;
  }
  write_atomic(c.out, manifest(argv, c.seed, n, wall, payload).dump(2));
  return kExitOk;
}

json prediction_json(const PredictionReport& p) {
  json j;
  j["metric"] = metric_name(p.metric);
  j["quantity"] = p.quantity;
  j["predicted"] = p.predicted;
  if (p.conjectured) {
    j["conjectured"] = *p.conjectured;
    j["conjectured_symbolic"] = *p.conjectured_symbolic;
    j["ratio"] = p.ratio;
  }
  return j;
}

int cmd_fit_predict(const std::vector<std::string>& argv,
                    const std::string& form, int m1, int m2,
                    const std::string& format, const CommonArgs& c) {
  const auto t0 = std::chrono::steady_clock::now();
  json payload;
  std::vector<PredictionReport> preds;

  auto predict_all4 = [&](const WeightingForm& w) {
    for (MetricKind m : {MetricKind::HS, MetricKind::Bures,
                         MetricKind::KuboMori, MetricKind::WignerYanase,
                         MetricKind::AvgMonotone}) {
      preds.push_back(predict(w, m, "volume"));
      if (m == MetricKind::HS || m == MetricKind::Bures ||
          m == MetricKind::KuboMori || m == MetricKind::AvgMonotone)
        preds.push_back(predict(w, m, "hyperarea"));
    }
  };

  try {
    if (form == "eq11") {
      const WeightingForm w = eq_single_power_form();
      payload["form"] = w.describe();
      predict_all4(w);
      const auto diag = flat_core_diagnostic(w);
      payload["flat_core"] = {{"center", diag.center},
                              {"min", diag.min},
                              {"max", diag.max},
                              {"rel_variation", diag.rel_variation}};
      const auto schur = schur_classify(w, 100000, c.seed + 17);
      payload["schur"] = {{"class", static_cast<int>(schur.cls)},
                          {"convex_violations", schur.convex_violations},
                          {"concave_violations", schur.concave_violations}};
    } else if (form == "two-term") {
      const auto fit = fit_two_term(m1, m2);
      payload["form"] = fit.form.describe();
      payload["a"] = fit.a;
      payload["b"] = fit.b;
      payload["b_over_a"] = fit.b / fit.a;
      predict_all4(fit.form);
      const auto schur = schur_classify(fit.form, 100000, c.seed + 17);
      payload["schur"] = {{"class", static_cast<int>(schur.cls)},
                          {"convex_violations", schur.convex_violations},
                          {"concave_violations", schur.concave_violations}};
    } else if (form == "blend") {
      const auto f33 = fit_two_term(3, 3);
      const auto f43 = fit_two_term(4, 3);
      const std::pair<WeightingForm, double> parts[2] = {{f33.form, 0.570347},
                                                         {f43.form, 0.429653}};
      const WeightingForm bl = blend(parts);
      payload["form"] = bl.describe();
      predict_all4(bl);
    } else if (form == "qutrit") {
      const auto fit = fit_qutrit();
      payload["form"] = fit.form.describe();
      payload["constant"] = fit.c;
      payload["hs_hyperarea_ratio"] = fit.hs_hyperarea_ratio;
      preds.push_back(predict(fit.form, MetricKind::Bures, "volume"));
      preds.push_back(predict(fit.form, MetricKind::Bures, "hyperarea"));
    } else {
      std::cerr << "unknown form: " << form << "\n";
      return kExitUsage;
    }
  } catch (const QuadBudgetError& e) {
    std::cerr << "numerical budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  }

  json jp = json::array();
  for (const auto& p : preds) jp.push_back(prediction_json(p));
  payload["predictions"] = jp;

  if (format == "csv") {
    std::ostringstream os;
    os << "form,metric,quantity,predicted,conjectured,ratio\r\n";
    os.precision(15);
    for (const auto& p : preds) {
      os << csv_escape(payload["form"].get<std::string>()) << ","
         << metric_name(p.metric) << "," << p.quantity << "," << p.predicted
         << ",";
      if (p.conjectured)
        os << *p.conjectured << "," << p.ratio;
      else
        os << ",";
      os << "\r\n";
    }
    write_atomic(c.out, os.str());
    return kExitOk;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_atomic(c.out, manifest(argv, c.seed, 0, wall, payload).dump(2));
  return kExitOk;
}

int cmd_verify(const std::vector<std::string>& argv, const std::string& suite,
               const std::string& budget, const CommonArgs& c) {
  VerifyOptions opt;
  opt.run_exact = suite == "exact" || suite == "all";
  opt.run_mc = suite == "mc" || suite == "all";
  if (!opt.run_exact && !opt.run_mc) {
    std::cerr << "suite must be exact|mc|all\n";
    return kExitUsage;
  }
  opt.mc_samples = parse_count(budget);
  opt.sampler_samples =
      std::clamp<std::uint64_t>(opt.mc_samples / 5, 200000, 10000000);
  if (c.seed) opt.seed = c.seed;

  const auto t0 = std::chrono::steady_clock::now();
  const VerifyReport rep = run_verification(opt, &std::cout);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  json rows = json::array();
  for (const auto& r : rep.results)
    rows.push_back(json{{"id", r.id},
                        {"pass", r.pass},
                        {"hard", r.hard},
                        {"detail", r.detail}});
  json payload;
  payload["suite"] = suite;
  payload["all_pass"] = rep.all_pass();
  payload["criteria"] = rows;
  write_atomic(c.out, manifest(argv, opt.seed, opt.mc_samples, wall, payload)
                          .dump(2));
  return rep.all_pass() ? kExitOk : kExitAcceptanceFailure;
}

int dispatch(const std::vector<std::string>& args);

int cmd_replay(const std::string& path, const std::string& out) {
  std::ifstream is(path);
  if (!is) {
    std::cerr << "cannot open manifest " << path << "\n";
    return kExitUsage;
  }
  json m;
  is >> m;
  if (!m.contains("argv")) {
    std::cerr << "not a run manifest\n";
    return kExitUsage;
  }
  std::vector<std::string> args = m["argv"].get<std::vector<std::string>>();
  // redirect the output
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--out") args[i + 1] = out;
  return dispatch(args);
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"separability volumes, probabilities and weighting-function "
               "fits for two-qubit and qubit-qutrit states"};
  app.require_subcommand(1);
  CommonArgs c;

  auto* est = app.add_subcommand("estimate",
                                 "Monte Carlo / quadrature estimates of "
                                 "volumes and separability probabilities");
  std::string metric = "hs", system = "2x2", quantity = "sep-probability";
  est->add_option("--metric", metric, "hs|bures|kubo-mori|wigner-yanase|average");
  est->add_option("--system", system, "2x2|2x3");
  est->add_option("--quantity", quantity,
                  "sep-probability|sep-volume|total-volume");
  est->add_option("--samples", c.samples, "sample count (accepts 1e7)");
  est->add_option("--seed", c.seed, "RNG seed");
  est->add_option("--out", c.out, "output JSON path ('-' = stdout)");

  auto* sc = app.add_subcommand("scenarios",
                                "restricted/full real scenario tables");
  int dim = 4;
  std::string constraint = "separable", format = "json";
  sc->add_option("--dim", dim, "scenario dimension: 3,4,5,7,9");
  sc->add_option("--constraint", constraint,
                 "feasible|one-2x2-pt-minor|one-3x3-pt-minor|separable");
  sc->add_option("--samples", c.samples, "samples per scenario");
  sc->add_option("--seed", c.seed, "RNG seed");
  sc->add_option("--format", format, "json|csv");
  sc->add_option("--out", c.out, "output path");

  auto* fp = app.add_subcommand("fit-predict",
                                "weighting-function fits and cross-metric "
                                "predictions");
  std::string form = "eq11";
  int m1 = 3, m2 = 3;
  fp->add_option("--form", form, "eq11|two-term|blend|qutrit");
  fp->add_option("--m1", m1, "e2 exponent (two-term)");
  fp->add_option("--m2", m2, "e3 exponent (two-term)");
  fp->add_option("--format", format, "json|csv");
  fp->add_option("--seed", c.seed, "RNG seed");
  fp->add_option("--out", c.out, "output path");

  auto* ct = app.add_subcommand("constants",
                                "dump the known/conjectured constant table");
  ct->add_option("--out", c.out, "output JSON path");

  auto* vf = app.add_subcommand("verify", "run the verification suite");
  std::string suite = "all", budget = "1e7";
  vf->add_option("--suite", suite, "exact|mc|all");
  vf->add_option("--budget", budget, "Monte Carlo samples per quantity");
  vf->add_option("--seed", c.seed, "RNG seed override");
  vf->add_option("--out", c.out, "report JSON path");

  auto* rp = app.add_subcommand("replay", "re-run a stored manifest");
  std::string manifest_path;
  rp->add_option("manifest", manifest_path, "manifest JSON")->required();
  rp->add_option("--out", c.out, "output path");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (est->parsed())
      return cmd_estimate(args, metric, system, quantity, c);
    if (sc->parsed()) return cmd_scenarios(args, dim, constraint, format, c);
    if (fp->parsed()) return cmd_fit_predict(args, form, m1, m2, format, c);
    if (ct->parsed()) {
      json rows = json::array();
      for (const auto& r : constant_table())
        rows.push_back(json{{"metric", metric_name(r.metric)},
                            {"system", r.system},
                            {"quantity", r.quantity},
                            {"symbolic", r.c.symbolic},
                            {"value", r.c.value},
                            {"note", r.c.note}});
      json payload;
      payload["version"] = constant_table_version();
      payload["constants"] = rows;
      write_atomic(c.out, manifest(args, 0, 0, 0.0, payload).dump(2));
      return kExitOk;
    }
    if (vf->parsed()) return cmd_verify(args, suite, budget, c);
    if (rp->parsed()) return cmd_replay(manifest_path, c.out);
  } catch (const QuadBudgetError& e) {
    std::cerr << "numerical budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args);
}
