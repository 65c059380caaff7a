#pragma once
// Truncated polynomial rings R = k[eps]/(eps^r) over a finite coefficient
// field k sitting inside a FieldTower, with valuation, reduction to shorter
// length, and the coefficientwise q-power Frobenius.
//
// A TruncRing fixes the ambient tower (the pool all coefficients are drawn
// from), the Frobenius base q = p^qdeg, and the truncation length r.
// Elements are fixed-size coefficient arrays; the entry at index i is the
// coefficient of eps^i, and entries at index >= r are kept zero so that
// operator== is structural equality.

#include <array>
#include <cstdint>
#include <vector>

#include "ringrep/gfield.hpp"

namespace ringrep {

inline constexpr int kMaxTruncLen = 4;

// One ring element: coefficients of 1, eps, eps^2, ...
using Re = std::array<Fe, kMaxTruncLen>;

class TruncRing {
 public:
  // tower: ambient coefficient field F_{p^K} (held by reference; must
  // outlive the ring).  qdeg: Frobenius base q = p^qdeg, qdeg | K.
  // r: truncation length, 1 <= r <= kMaxTruncLen.
  TruncRing(const FieldTower& tower, int qdeg, int r);

  const FieldTower& tower() const { return *F_; }
  int r() const { return r_; }
  int qdeg() const { return qdeg_; }
  std::uint64_t q() const { return q_; }

  Re zero() const { return Re{}; }
  Re one() const { return constant(F_->one()); }
  Re eps() const;                    // 0 if r = 1
  Re constant(const Fe& a) const;    // a + 0*eps + ...
  Re monomial(const Fe& a, int i) const;  // a*eps^i (0 if i >= r)
  Re from_int(long long n) const { return constant(F_->from_int(n)); }

  bool is_zero(const Re& x) const;
  Re add(const Re& x, const Re& y) const;
  Re sub(const Re& x, const Re& y) const;
  Re neg(const Re& x) const;
  Re mul(const Re& x, const Re& y) const;
  bool is_unit(const Re& x) const { return !F_->is_zero(x[0]); }
  Re inv(const Re& x) const;  // throws std::domain_error on non-units

  // Least i with coefficient of eps^i nonzero; r for the zero element.
  int valuation(const Re& x) const;

  // Truncation to length rp <= r (coefficients of eps^i, i >= rp, dropped).
  // A ring homomorphism onto k[eps]/(eps^rp).
  Re reduce(const Re& x, int rp) const;

  // Coefficientwise a -> a^(q^e); the e-fold ring Frobenius.
  Re frobenius(const Re& x, int e = 1) const;

  // Canonical integer encoding (mixed-radix over coefficient encodings);
  // injective on the full ring.  Requires |tower|^r < 2^63, checked at
  // construction.
  std::uint64_t encode(const Re& x) const;
  Re decode(std::uint64_t v) const;

  // All elements with every coefficient in the tower subfield of degree d
  // (d | K), in increasing encode() order: (p^d)^r of them.
  std::vector<Re> elements(int d) const;
  // The invertible ones among elements(d): (p^d - 1)(p^d)^(r-1) of them.
  std::vector<Re> units(int d) const;

 private:
  const FieldTower* F_;
  int qdeg_;
  int r_;
  std::uint64_t q_;
};

}  // namespace ringrep
