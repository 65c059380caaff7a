#pragma once
// Small exact integer number-theory helpers used across the library.
// Everything here is deterministic trial-division arithmetic on machine
// integers; inputs in this codebase are tiny (group orders < 10^6,
// moduli < 10^7), so no sophistication is needed or wanted.

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ringrep {

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Prime factorization by trial division: prime -> exponent.
inline std::map<std::uint64_t, int> factorize_u64(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize_u64(0)");
  std::map<std::uint64_t, int> out;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    while (n % d == 0) { ++out[d]; n /= d; }
  if (n > 1) ++out[n];
  return out;
}

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t m) {
  // Extended Euclid; m need not be prime but gcd(a, m) must be 1.
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
    tmp = r - q * nr; r = nr; nr = tmp;
  }
  if (r != 1) throw std::invalid_argument("invmod_u64: not invertible");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

inline std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  return a / std::gcd(a, b) * b;
}

// p^e as a 64-bit integer; throws on overflow.
inline std::uint64_t ipow_u64(std::uint64_t p, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > UINT64_MAX / p) throw std::overflow_error("ipow_u64 overflow");
    r *= p;
  }
  return r;
}

}  // namespace ringrep
