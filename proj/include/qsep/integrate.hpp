#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsep {

/// A Monte Carlo result: point estimate, one-sigma standard error, and the
/// sampling parameters needed to reproduce it.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Inverse-variance weighted combination of independent estimates.
/// Zero-variance (exact) members short-circuit to themselves.
Estimate merge(std::span<const Estimate> estimates);

/// Axis-aligned integration box.
struct Box {
  std::vector<double> lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
};

using Integrand = std::function<double(std::span<const double>)>;

/// Plain mean-value Monte Carlo over a box. Deterministic for a given
/// seed: sample i draws from CounterRng(seed, i), partial sums are chunked
/// in index order, so the result is identical for any thread count.
/// Throws std::runtime_error (with the offending point) on a non-finite
/// integrand value.
Estimate mc_integrate(const Integrand& f, const Box& box, std::uint64_t n,
                      std::uint64_t seed);

/// Deterministic quadrature control.
struct QuadratureSpec {
  int dimension = 3;                // simplex dimension (free coordinates)
  double target_rel_error = 1e-10;
  int max_subdivisions = 6;         // refinement steps before giving up
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = false;
};

/// Raised when a quadrature fails to meet its target within budget; carries
/// the best estimate reached.
class QuadBudgetError : public std::runtime_error {
 public:
  QuadBudgetError(const std::string& what, QuadResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadResult& best() const { return best_; }

 private:
  QuadResult best_;
};

/// Integral of f over the unit simplex { lambda_i >= 0, sum = 1 } with
/// `spec.dimension` free coordinates (f receives dimension+1 barycentric
/// values). The chart is stick-breaking composed with a tanh-sinh map per
/// axis, which absorbs endpoint singularities of the integrable kind
/// (inverse square roots, logarithms). Dimensions 1-3 use tensor
/// tanh-sinh rules with refinement; dimensions 4-5 use a deterministic
/// Sobol rule with doubling, per the same chart.
QuadResult quad_simplex(const Integrand& f, const QuadratureSpec& spec);

/// Convenience wrapper that returns the value and throws QuadBudgetError
/// when unconverged.
double quad_simplex_value(const Integrand& f, const QuadratureSpec& spec);

/// First `dim` coordinates of the Sobol point with the given index
/// (1-based; index 0 is the all-zeros point and is skipped). dim <= 6.
void sobol_point(std::uint64_t index, int dim, double* out);

/// Number of worker threads integration loops may use; reads QSEP_THREADS,
/// defaulting to the hardware concurrency. Results do not depend on it.
unsigned integration_threads();

}  // namespace qsep
