#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsep/measures.hpp"

namespace qsep {

/// Symmetric eigenvalue weighting function built from elementary symmetric
/// polynomials. Kinds:
///   SinglePowerE3: coeff * e3^expo          (n = 4)
///   TwoTerm:       a * e2^m1 + b * e3^m2    (n = 4)
///   SinglePowerE5: coeff * e5^expo          (n = 6)
///   Blend:         convex combination of forms (weights sum to 1)
struct WeightingForm {
  enum class Kind { SinglePowerE3, TwoTerm, SinglePowerE5, Blend };
  Kind kind = Kind::SinglePowerE3;

  double coeff = 0.0, expo = 0.0;  // single-power kinds
  double a = 0.0, b = 0.0;         // two-term
  int m1 = 0, m2 = 0;
  std::vector<std::pair<WeightingForm, double>> parts;  // blend

  int n() const;  // 4 or 6
  std::string describe() const;

  static WeightingForm single_power_e3(double coeff, double expo);
  static WeightingForm two_term(double a, int m1, double b, int m2);
  static WeightingForm single_power_e5(double coeff, double expo);
};

/// The e3^(53/20) form with the fitted constant 6086 that reproduces the
/// conjectured Hilbert-Schmidt separable volume and hyperarea.
WeightingForm eq_single_power_form();

/// Evaluate W at a simplex point (lambda.size() = n(); boundary points with
/// zero entries are fine). Exactly permutation invariant.
double eval_W(const WeightingForm& form, std::span<const double> lambda);

/// Result of the exact two-target fit.
struct TwoTermFit {
  WeightingForm form;
  double a = 0.0, b = 0.0;
  // the four moment integrals of the linear system (volume row, area row)
  double IV1 = 0, IV2 = 0, JA1 = 0, JA2 = 0;
};

/// Solve a * M[e2^m1] + b * M[e3^m2] = (V_sep, A_sep) exactly at quadrature
/// precision, with M the HS volume and hyperarea moment functionals and the
/// targets the conjectured HS separable volume (5 sqrt3)^-7 and hyperarea
/// (3^2 5^6)^-1. Negative coefficients are returned as-is. Throws on a
/// singular system.
TwoTermFit fit_two_term(int m1, int m2);

struct PredictionReport {
  MetricKind metric;
  std::string quantity;           // "volume" | "hyperarea"
  double predicted = 0.0;
  std::optional<double> conjectured;
  std::optional<std::string> conjectured_symbolic;
  double ratio = 0.0;             // predicted / conjectured (0 if absent)
};

/// predicted = integral of W against the metric's volume (or face) density,
/// times the n=4 Haar factor. Missing conjectures yield a report with
/// conjectured = nullopt.
PredictionReport predict(const WeightingForm& form, MetricKind metric,
                         std::string_view quantity);

/// Pointwise convex combination; weights must sum to 1 (1e-12).
WeightingForm blend(std::span<const std::pair<WeightingForm, double>> parts);

/// Qubit-qutrit fit: the constant c in c * e5^(9/5) such that the HS
/// separable volume conjecture for 2x3 is matched by 5-simplex integration.
struct QutritFit {
  WeightingForm form;
  double c = 0.0;
  double hs_volume_ratio = 1.0;    // exact by construction
  double hs_hyperarea_ratio = 0.0; // vs the 2x3 hyperarea conjecture
};
QutritFit fit_qutrit();

/// Majorization-based classification by sampled comparable pairs.
struct SchurWitness {
  std::array<double, 4> p, q;  // p majorizes q
  double wp, wq;
};
struct SchurReport {
  enum class Class { ConvexEvidence, ConcaveEvidence, Neither, DegenerateFlat };
  Class cls;
  std::uint64_t n_pairs = 0;
  std::uint64_t convex_violations = 0;   // pairs with W(p) < W(q)
  std::uint64_t concave_violations = 0;  // pairs with W(p) > W(q)
  std::vector<SchurWitness> witnesses;   // a few from each direction
};
SchurReport schur_classify(const WeightingForm& form, std::uint64_t n_draws,
                           std::uint64_t seed);

/// Variation of W over the ball sum (lambda_i - 1/4)^2 <= r^2 known to be
/// separable (purity <= 1/3); a diagnostic for the flat-core requirement,
/// reported but not enforced.
struct FlatCoreDiagnostic {
  double center = 0.0, min = 0.0, max = 0.0;
  double rel_variation = 0.0;  // (max-min)/center
};
FlatCoreDiagnostic flat_core_diagnostic(const WeightingForm& form);

}  // namespace qsep
