#pragma once
// Exact arithmetic in finite fields F_{p^K}, K <= 16, presented as
// F_p[x]/(f) for a canonical modulus f: the lexicographically least monic
// irreducible of degree K (least integer encoding sum c_i p^i of the
// non-leading coefficients).  The canonical modulus makes every element
// encoding reproducible across runs and platforms, which the rest of the
// library relies on for deterministic ordering and serialization.
//
// Elements are fixed-size coefficient arrays (little-endian, reduced mod p).
// A FieldTower is a context object passed explicitly to every operation;
// elements themselves carry no pointer back to their field.

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ringrep {

inline constexpr int kMaxFieldDeg = 16;

// One element of F_{p^K}: coefficients of its residue-class representative,
// entries at index >= K are zero.
using Fe = std::array<std::uint8_t, kMaxFieldDeg>;

class FieldTower {
 public:
  // Builds F_{p^K}.  p must be prime, 1 <= K <= kMaxFieldDeg, p^K < 2^63.
  static FieldTower make(int p, int K);

  int p() const { return p_; }
  int deg() const { return K_; }
  std::uint64_t size() const { return size_; }  // p^K

  // Non-leading coefficients (c_0..c_{K-1}) of the monic modulus.
  const std::vector<int>& modulus() const { return mod_; }

  Fe zero() const { return Fe{}; }
  Fe one() const { return from_int(1); }
  Fe gen() const;                 // residue class of x
  Fe from_int(long long n) const; // image of n under Z -> F_p -> F_{p^K}

  bool is_zero(const Fe& a) const;
  Fe add(const Fe& a, const Fe& b) const;
  Fe sub(const Fe& a, const Fe& b) const;
  Fe neg(const Fe& a) const;
  Fe mul(const Fe& a, const Fe& b) const;
  Fe inv(const Fe& a) const;  // throws std::domain_error on zero
  Fe pow(const Fe& a, std::uint64_t e) const;

  // e-fold Frobenius a -> a^(p^e); e >= 0.
  Fe frob(const Fe& a, int e = 1) const;

  // Canonical integer encoding sum c_i p^i (bijection with [0, p^K)).
  std::uint64_t encode(const Fe& a) const;
  Fe decode(std::uint64_t v) const;

  // The subfield F_{p^d} = fixed points of frob(.,d); requires d | K.
  // Returned in increasing encode() order.
  std::vector<Fe> subfield(int d) const;

  // All solutions of L(y) = c for an F_p-linear map L, in increasing
  // encode() order (empty if none).  L is sampled on the power basis, so it
  // must be F_p-linear; maps y -> a*y^(p^e) + b*y are the typical use.
  std::vector<Fe> solve_linear(const std::function<Fe(const Fe&)>& L,
                               const Fe& c) const;

  // Multiplicative order of a nonzero element.
  std::uint64_t mult_order(const Fe& a) const;

 private:
  FieldTower() = default;
  int p_ = 0;
  int K_ = 0;
  std::uint64_t size_ = 0;
  std::vector<int> mod_;                // c_0..c_{K-1}
  std::vector<std::array<int, kMaxFieldDeg>> red_;  // x^{K+j} mod f, j=0..K-2
};

}  // namespace ringrep
