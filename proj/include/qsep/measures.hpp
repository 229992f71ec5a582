#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsep/rng.hpp"

namespace qsep {

enum class MetricKind { HS, Bures, KuboMori, WignerYanase, AvgMonotone };

const char* metric_name(MetricKind m);
std::optional<MetricKind> metric_from_name(std::string_view name);

/// Morozova-Chentsov function c(x,y) of the metric (1/x on the diagonal).
/// HS is not a monotone metric and has no c; calling it is an error.
double mc_function(MetricKind m, double x, double y);

/// Boundary value c(x, 0). Finite limits for Bures (2/x), Wigner-Yanase
/// and the average metric (4/x). The Kubo-Mori limit diverges
/// logarithmically; the boundary density uses the minimal-metric value 2/x
/// there, the convention under which the hyperarea integrals below are
/// defined.
double mc_function_at_zero(MetricKind m, double x);

/// Eigenvalue-simplex density of the metric volume measure, n = 4 or 6
/// (lambda.size() is n). Normalization convention:
///   n=4: total volume = (pi^6/96) * integral of the density over the
///        3-simplex, the Haar factor being the 12-angle Euler integral;
///   n=6: total volume = integral over the 5-simplex directly.
/// Calibrated against the Sommers-Zyczkowski closed-form totals (tested to
/// six digits). Monotone metrics require all lambda_i > 0 (domain_error).
double simplex_density(MetricKind m, std::span<const double> lambda);

/// Density of the rank-deficient boundary face (exactly one eigenvalue
/// zero), used for hyperarea integrals; same normalization convention as
/// simplex_density. Throws std::domain_error when more than one eigenvalue
/// vanishes.
double face_density(MetricKind m, std::span<const double> lambda);

/// Haar factor that multiplies every n=4 eigenvalue integral.
double haar_const4();  // pi^6/96

/// alpha1..alpha12 in order; even-numbered angles (alpha2, alpha4, ...)
/// live in [0, pi/2], odd-numbered in [0, pi].
using EulerAngles = std::array<double, 12>;

/// Product density of the 12-angle Euler-angle Haar measure.
double haar_density(std::span<const double, 12> angles);

/// Integral of haar_density over its box. The density is a product of
/// one-dimensional factors; the integral is evaluated by per-axis
/// quadrature of axis slices (exact for separable integrands).
double haar_box_integral();

// --- known and conjectured constants -------------------------------------

/// One exact target value: symbolic form, decimal, and where it comes from.
struct ExactConstant {
  std::string symbolic;
  double value;
  std::string note;
};

/// Lookup key: metric, system ("2x2" or "2x3"), quantity. Quantities:
/// sep-volume, total-volume, sep-probability, sep-hyperarea,
/// total-hyperarea. Unknown keys -> nullopt.
std::optional<ExactConstant> constant(MetricKind m, std::string_view system,
                                      std::string_view quantity);

/// Whole table (for JSON export / enumeration).
struct ConstantRow {
  MetricKind metric;
  std::string system;
  std::string quantity;
  ExactConstant c;
};
const std::vector<ConstantRow>& constant_table();
std::string constant_table_version();

// --- metric-distributed samplers ------------------------------------------

/// Random density matrix of dimension 4 or 6 distributed per the metric's
/// volume measure; HS and Bures only. Deterministic given the generator
/// state (a fixed number of draws per call).
Eigen::MatrixXcd sample_state(MetricKind m, int dim, CounterRng& rng);

}  // namespace qsep
