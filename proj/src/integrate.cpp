#include "qsep/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "qsep/detail/chunks.hpp"
#include "qsep/rng.hpp"

namespace qsep {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

template <typename Partial, typename Work>
std::vector<Partial> run_chunks(std::uint64_t n_chunks, const Work& work) {
  return detail::run_chunks<Partial>(n_chunks, integration_threads(), work);
}

struct MeanAcc {
  double sum = 0.0, sumsq = 0.0;
  std::uint64_t n = 0;
  bool bad = false;
  double bad_point[9] = {0};
  int bad_dim = 0;
};

}  // namespace

unsigned integration_threads() {
  if (const char* env = std::getenv("QSEP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

Estimate merge(std::span<const Estimate> estimates) {
  if (estimates.empty()) throw std::invalid_argument("merge: empty list");
  // exact members dominate
  for (const auto& e : estimates)
    if (e.stderr_ == 0.0) return e;
  double wsum = 0.0, vsum = 0.0;
  std::uint64_t n = 0;
  for (const auto& e : estimates) {
    const double w = 1.0 / (e.stderr_ * e.stderr_);
    wsum += w;
    vsum += w * e.value;
    n += e.n_samples;
  }
  Estimate out;
  out.value = vsum / wsum;
  out.stderr_ = std::sqrt(1.0 / wsum);
  out.n_samples = n;
  out.seed = estimates.front().seed;
  return out;
}

Estimate mc_integrate(const Integrand& f, const Box& box, std::uint64_t n,
                      std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("mc_integrate: n must be positive");
  const int dim = box.dim();
  const double vol = box.volume();
  constexpr std::uint64_t kChunk = 1 << 18;
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;

  auto work = [&](std::uint64_t c) {
    MeanAcc acc;
    double x[9];
    const std::uint64_t beg = c * kChunk;
    const std::uint64_t end = std::min(n, beg + kChunk);
    for (std::uint64_t i = beg; i < end && !acc.bad; ++i) {
      CounterRng rng(seed, i);
      for (int d = 0; d < dim; ++d) x[d] = rng.uniform(box.lo[d], box.hi[d]);
      const double v = f(std::span<const double>(x, dim));
      if (!std::isfinite(v)) {
        acc.bad = true;
        acc.bad_dim = dim;
        std::copy(x, x + dim, acc.bad_point);
        break;
      }
      acc.sum += v;
      acc.sumsq += v * v;
      ++acc.n;
    }
    return acc;
  };

  const auto partials = run_chunks<MeanAcc>(n_chunks, work);
  double sum = 0.0, sumsq = 0.0;
  for (const auto& p : partials) {
    if (p.bad) {
      std::ostringstream os;
      os << "mc_integrate: non-finite integrand at (";
      for (int d = 0; d < p.bad_dim; ++d) os << (d ? ", " : "") << p.bad_point[d];
      os << ")";
      throw std::runtime_error(os.str());
    }
    sum += p.sum;
    sumsq += p.sumsq;
  }
  const double mean = sum / static_cast<double>(n);
  const double var =
      n > 1 ? std::max(0.0, (sumsq - sum * mean) / static_cast<double>(n - 1))
            : 0.0;
  Estimate e;
  e.value = vol * mean;
  e.stderr_ = vol * std::sqrt(var / static_cast<double>(n));
  e.n_samples = n;
  e.seed = seed;
  return e;
}

// ---------------------------------------------------------------------------
// tanh-sinh nodes on (0,1), kept as (s, 1-s, w) with both tails computed in
// a cancellation-free form so that s and 1-s stay strictly positive.

namespace {

struct DeRule {
  std::vector<double> s, om, w;
};

DeRule de_rule(int n, double U = 3.2) {
  DeRule r;
  r.s.resize(n);
  r.om.resize(n);
  r.w.resize(n);
  const double h = 2.0 * U / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double u = -U + h * i;
    const double t = kPi * std::sinh(u);
    const double s = 1.0 / (1.0 + std::exp(-t));
    const double om = 1.0 / (1.0 + std::exp(t));
    r.s[i] = s;
    r.om[i] = om;
    r.w[i] = h * kPi * std::cosh(u) * s * om;
  }
  return r;
}

// Stick-breaking tensor quadrature over the m-simplex for m = 1..3.
double tensor_pass(const Integrand& f, int m, const DeRule& r,
                   std::uint64_t* evals) {
  const int n = static_cast<int>(r.s.size());
  if (m == 1) {
    double acc = 0.0;
    double lam[2];
    for (int i = 0; i < n; ++i) {
      lam[0] = r.s[i];
      lam[1] = r.om[i];
      acc += f(std::span<const double>(lam, 2)) * r.w[i];
    }
    *evals += n;
    return acc;
  }
  if (m == 2) {
    double acc = 0.0;
    double lam[3];
    for (int i = 0; i < n; ++i) {
      const double rem0 = r.om[i];
      double inner = 0.0;
      for (int j = 0; j < n; ++j) {
        lam[0] = r.s[i];
        lam[1] = rem0 * r.s[j];
        lam[2] = rem0 * r.om[j];
        inner += f(std::span<const double>(lam, 3)) * r.w[j];
      }
      acc += inner * r.w[i] * rem0;  // jacobian rem0
    }
    *evals += std::uint64_t(n) * n;
    return acc;
  }
  // m == 3: thread over the outer axis, combine in index order. Deep-tail
  // nodes whose lambda underflows carry weights below 1e-600 and are
  // skipped so that singular densities cannot produce inf * 0.
  auto work = [&](std::uint64_t io) {
    const int i = static_cast<int>(io);
    const double rem0 = r.om[i];
    double lam[4];
    double acc_i = 0.0;
    for (int j = 0; j < n; ++j) {
      const double rem1 = rem0 * r.om[j];
      const double l1 = rem0 * r.s[j];
      if (rem1 < 1e-280 || l1 < 1e-280) continue;
      double inner = 0.0;
      for (int k = 0; k < n; ++k) {
        lam[0] = r.s[i];
        lam[1] = l1;
        lam[2] = rem1 * r.s[k];
        lam[3] = rem1 * r.om[k];
        if (lam[2] < 1e-280 || lam[3] < 1e-280) continue;
        inner += f(std::span<const double>(lam, 4)) * r.w[k];
      }
      acc_i += inner * r.w[j] * rem1;
    }
    return acc_i * r.w[i] * rem0;
  };
  const auto partials = run_chunks<double>(n, work);
  double acc = 0.0;
  for (double p : partials) acc += p;
  *evals += std::uint64_t(n) * n * n;
  return acc;
}

// Sobol pass over the sin^2-mapped stick-breaking chart (dims 4-5).
double sobol_pass(const Integrand& f, int m, std::uint64_t n_lo,
                  std::uint64_t n_hi, std::uint64_t* evals) {
  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t count = n_hi - n_lo;
  const std::uint64_t n_chunks = (count + kChunk - 1) / kChunk;
  auto work = [&](std::uint64_t c) {
    double acc = 0.0;
    double u[6], lam[6];
    const std::uint64_t beg = n_lo + c * kChunk;
    const std::uint64_t end = std::min(n_hi, beg + kChunk);
    for (std::uint64_t idx = beg; idx < end; ++idx) {
      sobol_point(idx, m, u);
      double jac = 1.0, rem = 1.0;
      for (int d = 0; d < m; ++d) {
        const double sn = std::sin(0.5 * kPi * u[d]);
        const double s = sn * sn;
        const double ds = 0.5 * kPi * std::sin(kPi * u[d]);
        lam[d] = rem * s;
        jac *= rem * ds;
        rem *= 1.0 - s;
      }
      lam[m] = rem;
      acc += f(std::span<const double>(lam, m + 1)) * jac;
    }
    return acc;
  };
  const auto partials = run_chunks<double>(n_chunks, work);
  double acc = 0.0;
  for (double p : partials) acc += p;
  *evals += count;
  return acc;
}

}  // namespace

QuadResult quad_simplex(const Integrand& f, const QuadratureSpec& spec) {
  const int m = spec.dimension;
  if (m < 1 || m > 5)
    throw std::invalid_argument("quad_simplex: dimension must be in [1,5]");

  QuadResult res;
  if (m <= 3) {
    const int max_nodes = (m == 3) ? 289 : 513;
    double prev = 0.0;
    bool have_prev = false;
    // the truncation window widens with the level so the tail error keeps
    // pace with the discretization error
    double U = 3.2;
    for (int n = 33; n <= max_nodes; n = 2 * n - 1, U += 0.4) {
      const DeRule r = de_rule(n, std::min(U, 4.4));
      const double val = tensor_pass(f, m, r, &res.evaluations);
      if (have_prev) {
        res.error_estimate = std::abs(val - prev);
        const double scale = std::max(std::abs(val), 1e-300);
        if (res.error_estimate <= spec.target_rel_error * scale) {
          res.value = val;
          res.converged = true;
          return res;
        }
      }
      prev = val;
      have_prev = true;
      res.value = val;
    }
  } else {
    // quasi-Monte Carlo fallback for the qubit-qutrit integrals
    std::uint64_t n_pts = 1ull << 19;
    double total = sobol_pass(f, m, 1, n_pts + 1, &res.evaluations);
    double prev = total / static_cast<double>(n_pts);
    res.value = prev;
    const std::uint64_t budget = 1ull << (19 + std::max(spec.max_subdivisions, 1));
    while (n_pts < budget) {
      total += sobol_pass(f, m, n_pts + 1, 2 * n_pts + 1, &res.evaluations);
      n_pts *= 2;
      const double val = total / static_cast<double>(n_pts);
      res.error_estimate = std::abs(val - prev);
      res.value = val;
      const double scale = std::max(std::abs(val), 1e-300);
      if (res.error_estimate <= spec.target_rel_error * scale) {
        res.converged = true;
        return res;
      }
      prev = val;
    }
  }
  return res;  // unconverged; caller may accept or throw
}

double quad_simplex_value(const Integrand& f, const QuadratureSpec& spec) {
  const QuadResult r = quad_simplex(f, spec);
  if (!r.converged) {
    std::ostringstream os;
    os << "quad_simplex: target relative error " << spec.target_rel_error
       << " not reached (best " << r.value << " +- " << r.error_estimate << ")";
    throw QuadBudgetError(os.str(), r);
  }
  return r.value;
}

// ---------------------------------------------------------------------------
// Sobol sequence, dimensions <= 6 (Joe-Kuo direction numbers), Gray code.

namespace {

struct SobolTables {
  std::uint32_t v[6][32];
  SobolTables() {
    // dimension 1: van der Corput
    for (int k = 0; k < 32; ++k) v[0][k] = 1u << (31 - k);
    struct Row {
      int s;
      std::uint32_t a;
      std::uint32_t m[4];
    };
    static const Row rows[5] = {
        {1, 0, {1, 0, 0, 0}},
        {2, 1, {1, 3, 0, 0}},
        {3, 1, {1, 3, 1, 0}},
        {3, 2, {1, 1, 1, 0}},
        {4, 1, {1, 1, 3, 3}},
    };
    for (int d = 0; d < 5; ++d) {
      const Row& r = rows[d];
      std::uint32_t m[32];
      for (int k = 0; k < r.s; ++k) m[k] = r.m[k];
      for (int k = r.s; k < 32; ++k) {
        std::uint32_t mk = m[k - r.s] ^ (m[k - r.s] << r.s);
        for (int j = 1; j < r.s; ++j)
          if ((r.a >> (r.s - 1 - j)) & 1u) mk ^= m[k - j] << j;
        m[k] = mk;
      }
      for (int k = 0; k < 32; ++k) v[d + 1][k] = m[k] << (31 - k);
    }
  }
};

const SobolTables& sobol_tables() {
  static const SobolTables t;
  return t;
}

}  // namespace

void sobol_point(std::uint64_t index, int dim, double* out) {
  // Gray-code construction evaluated directly: x = xor of v[k] over set bits
  // of gray(index). Stateless, so chunks can start anywhere.
  const SobolTables& t = sobol_tables();
  const std::uint64_t g = index ^ (index >> 1);
  for (int d = 0; d < dim; ++d) {
    std::uint32_t x = 0;
    std::uint64_t bits = g;
    int k = 0;
    while (bits) {
      if (bits & 1ull) x ^= t.v[d][k];
      bits >>= 1;
      ++k;
    }
    out[d] = (static_cast<double>(x) + 0.5) * 0x1.0p-32;
  }
}

}  // namespace qsep
