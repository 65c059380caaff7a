#pragma once
// Structure theory for small finite abelian groups presented as
// FiniteGroup oracles: an explicit direct-product decomposition into
// cyclic factors, discrete logarithms with respect to it, and the full
// dual group of cyclotomic-valued characters.

#include <cstdint>
#include <vector>

#include "ringrep/charkit.hpp"
#include "ringrep/cyclo.hpp"

namespace ringrep {

struct AbelianStructure {
  // Generators g_0, g_1, ... of orders d_0 >= d_1 >= ... (each d_{t+1}
  // divides d_t), with G = prod <g_t> internally direct: every element
  // factors uniquely as prod g_t^{e_t}, 0 <= e_t < d_t.
  std::vector<int> gens;
  std::vector<std::uint64_t> orders;
  // dlog[x] = the exponent vector of element x.
  std::vector<std::vector<std::uint64_t>> dlog;
};

// Decompose a finite abelian group (|G| <= 10000; throws if nonabelian).
AbelianStructure abelian_structure(const FiniteGroup& G);

// One character of an abelian group, tabulated on all elements.
struct AbelianChar {
  std::vector<std::uint64_t> expo;  // a_t in [0, d_t): chi(g_t) = zeta_{d_t}^{a_t}
  std::vector<Cyclo> values;        // chi(x) for every element index x
  std::uint64_t order = 1;          // order in the dual group

  const Cyclo& value(int x) const { return values[static_cast<size_t>(x)]; }
  bool is_trivial() const { return order == 1; }
};

// All |G| characters, ordered lexicographically by exponent vector (so the
// trivial character is first).
std::vector<AbelianChar> all_characters(const FiniteGroup& G,
                                        const AbelianStructure& S);

// Pointwise-product character (the dual-group operation), recomputed from
// exponent vectors; ~inverse is conjugation.
AbelianChar char_mul(const AbelianStructure& S, const FiniteGroup& G,
                     const AbelianChar& a, const AbelianChar& b);
AbelianChar char_inv(const AbelianStructure& S, const FiniteGroup& G,
                     const AbelianChar& a);

}  // namespace ringrep
