#pragma once
// Exact arithmetic in cyclotomic fields Q(zeta_m): elements are rational
// coefficient vectors against the power basis 1, z, ..., z^{phi(m)-1},
// reduced modulo the m-th cyclotomic polynomial.  Mixed-conductor operands
// are promoted to the lcm conductor.  No floating point anywhere; the
// complex embedding is provided for display only.

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace ringrep {

class Cyclo {
 public:
  Cyclo() : m_(1), c_(1, mpq_class(0)) {}  // zero in Q
  explicit Cyclo(const mpq_class& r) : m_(1), c_(1, r) {}
  explicit Cyclo(long v) : m_(1), c_(1, mpq_class(v)) {}

  // zeta_m^k.
  static Cyclo root_of_unity(int m, long k);

  int conductor() const { return m_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  Cyclo operator+(const Cyclo& o) const;
  Cyclo operator-(const Cyclo& o) const;
  Cyclo operator*(const Cyclo& o) const;
  Cyclo operator-() const;
  Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }
  Cyclo& operator-=(const Cyclo& o) { return *this = *this - o; }
  Cyclo& operator*=(const Cyclo& o) { return *this = *this * o; }
  bool operator==(const Cyclo& o) const;
  bool operator!=(const Cyclo& o) const { return !(*this == o); }

  // Galois action z -> z^j, gcd(j, m) = 1; conj() is j = -1 (complex
  // conjugation).
  Cyclo galois(long j) const;
  Cyclo conj() const { return galois(-1); }

  bool is_zero() const;
  bool is_rational() const;
  mpq_class rational_value() const;  // throws if not rational
  bool is_integer() const;

  // Total order used only for deterministic output: compares conductors
  // after promotion to the lcm, then coefficient vectors lexicographically.
  static int compare(const Cyclo& a, const Cyclo& b);

  std::string str() const;  // exact human-readable form, e.g. "1/2 - z6^2"
  std::pair<double, double> to_complex() const;  // display only

  // Promote to a conductor that m divides (public for tests and callers
  // that align several values on one basis).
  Cyclo promoted(int M) const;

 private:
  int m_;
  std::vector<mpq_class> c_;  // size phi(m_)
};

}  // namespace ringrep
