#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>

namespace qsep::oracle {

/// Exact rational arithmetic over polynomials in (lambda1..lambda4),
/// integrated against Lebesgue measure on the 3-simplex (or its lambda4 = 0
/// face) via the Dirichlet moment formula
///   integral prod lambda_i^{a_i} = prod a_i! / (sum a_i + dim)!.
/// This path shares nothing with the floating-point quadrature it
/// cross-checks.

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class Poly4 {
 public:
  using Monomial = std::array<int, 4>;

  static Poly4 one();
  static Poly4 variable(int i);
  static Poly4 elementary(int k);           // e_k(lambda1..lambda4)
  static Poly4 squared_vandermonde();       // prod_{i<j} (li - lj)^2

  Poly4 operator*(const Poly4& rhs) const;
  Poly4 operator-(const Poly4& rhs) const;
  Poly4 pow(int k) const;

  /// integral over the 3-simplex (lambda4 = 1 - l1 - l2 - l3 substituted by
  /// treating all four exponents via the Dirichlet formula)
  BigRat moment_simplex() const;

  /// integral over the lambda4 = 0 face (2-simplex in lambda1..lambda3)
  BigRat moment_face() const;

  const std::map<Monomial, BigInt>& terms() const { return terms_; }

 private:
  std::map<Monomial, BigInt> terms_;
};

double to_double(const BigRat& r);

}  // namespace qsep::oracle
