#include "qsep/weightfit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qsep/integrate.hpp"
#include "qsep/rng.hpp"

namespace qsep {

namespace {

double elementary_symmetric(std::span<const double> l, int k) {
  // e_k via the Newton triangle; l.size() <= 6
  double e[7] = {1.0, 0, 0, 0, 0, 0, 0};
  for (double x : l)
    for (int j = std::min<int>(k, 6); j >= 1; --j) e[j] += x * e[j - 1];
  return e[k];
}

void sorted_copy(std::span<const double> in, double* out) {
  std::copy(in.begin(), in.end(), out);
  std::sort(out, out + in.size(), std::greater<double>());
}

}  // namespace

int WeightingForm::n() const {
  switch (kind) {
    case Kind::SinglePowerE3:
    case Kind::TwoTerm:
      return 4;
    case Kind::SinglePowerE5:
      return 6;
    case Kind::Blend:
      return parts.empty() ? 4 : parts.front().first.n();
  }
  return 4;
}

std::string WeightingForm::describe() const {
  std::ostringstream os;
  os.precision(10);
  switch (kind) {
    case Kind::SinglePowerE3:
      os << coeff << " * e3^" << expo;
      break;
    case Kind::TwoTerm:
      os << a << " * e2^" << m1 << " + " << b << " * e3^" << m2;
      break;
    case Kind::SinglePowerE5:
      os << coeff << " * e5^" << expo;
      break;
    case Kind::Blend: {
      bool first = true;
      for (const auto& [f, w] : parts) {
        if (!first) os << " + ";
        os << w << "*(" << f.describe() << ")";
        first = false;
      }
      break;
    }
  }
  return os.str();
}

WeightingForm WeightingForm::single_power_e3(double coeff, double expo) {
  WeightingForm f;
  f.kind = Kind::SinglePowerE3;
  f.coeff = coeff;
  f.expo = expo;
  return f;
}

WeightingForm WeightingForm::two_term(double a, int m1, double b, int m2) {
  WeightingForm f;
  f.kind = Kind::TwoTerm;
  f.a = a;
  f.m1 = m1;
  f.b = b;
  f.m2 = m2;
  return f;
}

WeightingForm WeightingForm::single_power_e5(double coeff, double expo) {
  WeightingForm f;
  f.kind = Kind::SinglePowerE5;
  f.coeff = coeff;
  f.expo = expo;
  return f;
}

WeightingForm eq_single_power_form() {
  return WeightingForm::single_power_e3(6086.0, 53.0 / 20.0);
}

double eval_W(const WeightingForm& form, std::span<const double> lambda) {
  if (static_cast<int>(lambda.size()) != form.n())
    throw std::invalid_argument("eval_W: wrong eigenvalue count");
  double l[6];
  sorted_copy(lambda, l);  // exact permutation invariance
  const std::span<const double> ls(l, lambda.size());
  switch (form.kind) {
    case WeightingForm::Kind::SinglePowerE3:
      return form.coeff * std::pow(elementary_symmetric(ls, 3), form.expo);
    case WeightingForm::Kind::TwoTerm: {
      const double e2 = elementary_symmetric(ls, 2);
      const double e3 = elementary_symmetric(ls, 3);
      return form.a * std::pow(e2, form.m1) + form.b * std::pow(e3, form.m2);
    }
    case WeightingForm::Kind::SinglePowerE5:
      return form.coeff * std::pow(elementary_symmetric(ls, 5), form.expo);
    case WeightingForm::Kind::Blend: {
      double s = 0.0;
      for (const auto& [f, w] : form.parts) s += w * eval_W(f, lambda);
      return s;
    }
  }
  return 0.0;
}

namespace {

// HS volume/hyperarea functionals of a weighting function (n = 4), Haar
// factor included.
double hs_volume_functional(const Integrand& w, double target_rel) {
  QuadratureSpec spec{3, target_rel, 6};
  const double v = quad_simplex_value(
      [&](std::span<const double> l) {
        return w(l) * simplex_density(MetricKind::HS, l);
      },
      spec);
  return haar_const4() * v;
}

double hs_area_functional(const Integrand& wf, double target_rel) {
  QuadratureSpec spec{2, target_rel, 6};
  const double v = quad_simplex_value(
      [&](std::span<const double> l) {
        const double l4[4] = {l[0], l[1], l[2], 0.0};
        return wf(std::span<const double>(l4, 4)) *
               face_density(MetricKind::HS, std::span<const double>(l4, 4));
      },
      spec);
  return haar_const4() * v;
}

}  // namespace

TwoTermFit fit_two_term(int m1, int m2) {
  if (m1 < 1 || m1 > 4 || m2 < 1 || m2 > 4)
    throw std::invalid_argument("fit_two_term: exponents must be in [1,4]");
  const double tol = 1e-11;
  auto e2term = [m1](std::span<const double> l) {
    double buf[6];
    sorted_copy(l, buf);
    return std::pow(
        elementary_symmetric(std::span<const double>(buf, l.size()), 2), m1);
  };
  auto e3term = [m2](std::span<const double> l) {
    double buf[6];
    sorted_copy(l, buf);
    return std::pow(
        elementary_symmetric(std::span<const double>(buf, l.size()), 3), m2);
  };
  TwoTermFit fit;
  fit.IV1 = hs_volume_functional(e2term, tol);
  fit.IV2 = hs_volume_functional(e3term, tol);
  fit.JA1 = hs_area_functional(e2term, tol);
  fit.JA2 = hs_area_functional(e3term, tol);

  const double V = constant(MetricKind::HS, "2x2", "sep-volume")->value;
  const double A = constant(MetricKind::HS, "2x2", "sep-hyperarea")->value;
  const double det = fit.IV1 * fit.JA2 - fit.IV2 * fit.JA1;
  if (std::abs(det) < 1e-300 ||
      std::abs(det) < 1e-12 * std::abs(fit.IV1 * fit.JA2))
    throw std::runtime_error("fit_two_term: singular moment system");
  fit.a = (V * fit.JA2 - A * fit.IV2) / det;
  fit.b = (A * fit.IV1 - V * fit.JA1) / det;
  fit.form = WeightingForm::two_term(fit.a, m1, fit.b, m2);
  return fit;
}

PredictionReport predict(const WeightingForm& form, MetricKind metric,
                         std::string_view quantity) {
  if (quantity != "volume" && quantity != "hyperarea")
    throw std::invalid_argument("predict: quantity must be volume|hyperarea");
  const int n = form.n();
  const bool vol = quantity == "volume";

  PredictionReport rep;
  rep.metric = metric;
  rep.quantity = std::string(quantity);

  if (n == 4) {
    const double tol = 3e-6;
    if (vol) {
      QuadratureSpec spec{3, tol, 6};
      rep.predicted = haar_const4() *
                      quad_simplex_value(
                          [&](std::span<const double> l) {
                            return eval_W(form, l) * simplex_density(metric, l);
                          },
                          spec);
    } else {
      QuadratureSpec spec{2, tol, 6};
      rep.predicted = haar_const4() *
                      quad_simplex_value(
                          [&](std::span<const double> l) {
                            const double l4[4] = {l[0], l[1], l[2], 0.0};
                            const std::span<const double> ls(l4, 4);
                            return eval_W(form, ls) * face_density(metric, ls);
                          },
                          spec);
    }
  } else {
    const double tol = 2e-4;
    if (vol) {
      QuadratureSpec spec{5, tol, 6};
      rep.predicted = quad_simplex_value(
          [&](std::span<const double> l) {
            return eval_W(form, l) * simplex_density(metric, l);
          },
          spec);
    } else {
      QuadratureSpec spec{4, tol, 6};
      rep.predicted = quad_simplex_value(
          [&](std::span<const double> l) {
            const double l6[6] = {l[0], l[1], l[2], l[3], l[4], 0.0};
            const std::span<const double> ls(l6, 6);
            return eval_W(form, ls) * face_density(metric, ls);
          },
          spec);
    }
  }

  const char* sys = (n == 4) ? "2x2" : "2x3";
  const char* q = vol ? "sep-volume" : "sep-hyperarea";
  if (auto c = constant(metric, sys, q)) {
    rep.conjectured = c->value;
    rep.conjectured_symbolic = c->symbolic;
    rep.ratio = rep.predicted / c->value;
  }
  return rep;
}

WeightingForm blend(
    std::span<const std::pair<WeightingForm, double>> parts) {
  if (parts.empty()) throw std::invalid_argument("blend: empty list");
  double sum = 0.0;
  for (const auto& [f, w] : parts) {
    if (f.n() != parts.front().first.n())
      throw std::invalid_argument("blend: mixed eigenvalue counts");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("blend: weights must sum to 1");
  WeightingForm f;
  f.kind = WeightingForm::Kind::Blend;
  f.parts.assign(parts.begin(), parts.end());
  return f;
}

QutritFit fit_qutrit() {
  const double V = constant(MetricKind::HS, "2x3", "sep-volume")->value;
  const double A = constant(MetricKind::HS, "2x3", "sep-hyperarea")->value;
  const double expo = 9.0 / 5.0;

  QuadratureSpec vspec{5, 2e-4, 6};
  const double iv = quad_simplex_value(
      [&](std::span<const double> l) {
        double buf[6];
        sorted_copy(l, buf);
        return std::pow(elementary_symmetric({buf, 6}, 5), expo) *
               simplex_density(MetricKind::HS, l);
      },
      vspec);

  QutritFit fit;
  fit.c = V / iv;
  fit.form = WeightingForm::single_power_e5(fit.c, expo);
  fit.hs_volume_ratio = 1.0;

  QuadratureSpec aspec{4, 2e-4, 6};
  const double ja = quad_simplex_value(
      [&](std::span<const double> l) {
        const double l6[6] = {l[0], l[1], l[2], l[3], l[4], 0.0};
        const std::span<const double> ls(l6, 6);
        return eval_W(fit.form, ls) * face_density(MetricKind::HS, ls);
      },
      aspec);
  fit.hs_hyperarea_ratio = ja / A;
  return fit;
}

SchurReport schur_classify(const WeightingForm& form, std::uint64_t n_draws,
                           std::uint64_t seed) {
  const int n = form.n();
  SchurReport rep;
  rep.n_pairs = n_draws;
  constexpr std::size_t kMaxWitness = 3;
  std::vector<SchurWitness> conv, conc;

  for (std::uint64_t i = 0; i < n_draws; ++i) {
    CounterRng rng(seed, i);
    double p[6], sum = 0.0;
    for (int k = 0; k < n; ++k) {
      p[k] = -std::log(rng.uniform());
      sum += p[k];
    }
    for (int k = 0; k < n; ++k) p[k] /= sum;
    // q = image of p under random T-transforms, so p majorizes q
    double q[6];
    std::copy(p, p + n, q);
    const int moves = 1 + static_cast<int>(rng.uniform() * 3.0);
    for (int m = 0; m < moves; ++m) {
      const int a = static_cast<int>(rng.uniform() * n) % n;
      int b = static_cast<int>(rng.uniform() * n) % n;
      if (a == b) b = (b + 1) % n;
      const double t = rng.uniform();  // in [0,1]: convex mix toward swap
      const double qa = (1.0 - t) * q[a] + t * q[b];
      const double qb = (1.0 - t) * q[b] + t * q[a];
      q[a] = qa;
      q[b] = qb;
    }
    const double wp = eval_W(form, std::span<const double>(p, n));
    const double wq = eval_W(form, std::span<const double>(q, n));
    const double tol = 1e-9 * std::max({std::abs(wp), std::abs(wq), 1e-30});
    if (wp < wq - tol) {
      ++rep.convex_violations;
      if (conv.size() < kMaxWitness && n == 4)
        conv.push_back({{p[0], p[1], p[2], p[3]}, {q[0], q[1], q[2], q[3]},
                        wp, wq});
    } else if (wp > wq + tol) {
      ++rep.concave_violations;
      if (conc.size() < kMaxWitness && n == 4)
        conc.push_back({{p[0], p[1], p[2], p[3]}, {q[0], q[1], q[2], q[3]},
                        wp, wq});
    }
  }

  using C = SchurReport::Class;
  if (rep.convex_violations == 0 && rep.concave_violations == 0)
    rep.cls = C::DegenerateFlat;
  else if (rep.convex_violations > 0 && rep.concave_violations > 0)
    rep.cls = C::Neither;
  else if (rep.convex_violations > 0)
    rep.cls = C::ConcaveEvidence;  // Schur-convexity violated, concavity not
  else
    rep.cls = C::ConvexEvidence;
  rep.witnesses = std::move(conv);
  rep.witnesses.insert(rep.witnesses.end(), conc.begin(), conc.end());
  return rep;
}

FlatCoreDiagnostic flat_core_diagnostic(const WeightingForm& form) {
  const int n = form.n();
  FlatCoreDiagnostic d;
  std::vector<double> center(n, 1.0 / n);
  d.center = eval_W(form, center);
  // purity <= 1/3 ball for n = 4: radius 1/(2 sqrt 3) around the maximally
  // mixed state; for n = 6 use the inscribed ball of radius
  // sqrt(1/(n-1) - 1/n)
  const double r = std::sqrt(1.0 / (n - 1.0) - 1.0 / n);
  d.min = d.max = d.center;
  CounterRng rng(20240617, 0);
  double v[6], l[6];
  for (int it = 0; it < 200000; ++it) {
    double dot = 0.0;
    for (int k = 0; k < n; ++k) {
      v[k] = rng.normal();
      dot += v[k];
    }
    double norm = 0.0;
    for (int k = 0; k < n; ++k) {
      v[k] -= dot / n;
      norm += v[k] * v[k];
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12) continue;
    for (int k = 0; k < n; ++k)
      l[k] = std::max(0.0, 1.0 / n + r * v[k] / norm);
    const double w = eval_W(form, std::span<const double>(l, n));
    d.min = std::min(d.min, w);
    d.max = std::max(d.max, w);
  }
  d.rel_variation = (d.max - d.min) / std::max(d.center, 1e-300);
  return d;
}

}  // namespace qsep
