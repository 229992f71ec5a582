#include "qsep/oracle_moments.hpp"

#include <bit>

namespace qsep::oracle {

namespace {

BigInt factorial(int n) {
  BigInt f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

Poly4 Poly4::one() {
  Poly4 p;
  p.terms_[{0, 0, 0, 0}] = 1;
  return p;
}

Poly4 Poly4::variable(int i) {
  Poly4 p;
  Monomial m{0, 0, 0, 0};
  m[i] = 1;
  p.terms_[m] = 1;
  return p;
}

Poly4 Poly4::elementary(int k) {
  Poly4 p;
  for (int mask = 0; mask < 16; ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) != k) continue;
    Monomial m{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
      if (mask & (1 << i)) m[i] = 1;
    p.terms_[m] = 1;
  }
  return p;
}

Poly4 Poly4::squared_vandermonde() {
  Poly4 p = one();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const Poly4 d = variable(i) - variable(j);
      p = p * d * d;
    }
  return p;
}

Poly4 Poly4::operator*(const Poly4& rhs) const {
  Poly4 out;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : rhs.terms_) {
      Monomial m{m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3]};
      out.terms_[m] += c1 * c2;
    }
  return out;
}

Poly4 Poly4::operator-(const Poly4& rhs) const {
  Poly4 out = *this;
  for (const auto& [m, c] : rhs.terms_) out.terms_[m] -= c;
  return out;
}

Poly4 Poly4::pow(int k) const {
  Poly4 out = one();
  for (int i = 0; i < k; ++i) out = out * (*this);
  return out;
}

BigRat Poly4::moment_simplex() const {
  BigRat sum = 0;
  for (const auto& [m, c] : terms_) {
    if (c == 0) continue;
    const int deg = m[0] + m[1] + m[2] + m[3];
    BigInt num = c;
    for (int a : m) num *= factorial(a);
    sum += BigRat(num, factorial(deg + 3));
  }
  return sum;
}

BigRat Poly4::moment_face() const {
  BigRat sum = 0;
  for (const auto& [m, c] : terms_) {
    if (c == 0 || m[3] != 0) continue;
    const int deg = m[0] + m[1] + m[2];
    BigInt num = c;
    for (int i = 0; i < 3; ++i) num *= factorial(m[i]);
    sum += BigRat(num, factorial(deg + 2));
  }
  return sum;
}

double to_double(const BigRat& r) { return static_cast<double>(r); }

}  // namespace qsep::oracle
