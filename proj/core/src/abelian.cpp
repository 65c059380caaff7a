#include "ringrep/abelian.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "ringrep/numth.hpp"

namespace ringrep {

namespace {

// Recursive decomposition: pick a maximal-order element g (a cyclic direct
// summand), decompose the quotient G/<g>, lift its generators, and correct
// each lift h (with image order d) by a power of g so that h^d = 1.  The
// correction exponent is integral because ord(h) divides the exponent of G,
// which equals ord(g) by maximality.
struct Decomp {
  std::vector<int> gens;
  std::vector<std::uint64_t> orders;
};

Decomp decompose(const FiniteGroup& G) {
  Decomp out;
  if (G.size() == 1) return out;

  // Maximal order element, least index on ties.
  int g = 0;
  for (int x = 1; x < G.size(); ++x)
    if (G.order_of(x) > G.order_of(g)) g = x;
  std::uint64_t d1 = G.order_of(g);
  out.gens.push_back(g);
  out.orders.push_back(d1);
  if (d1 == static_cast<std::uint64_t>(G.size())) return out;

  // Cosets of <g>: canonical representative = least element index.
  std::vector<int> in_sub(static_cast<size_t>(G.size()), 0);
  {
    int x = G.id();
    do {
      in_sub[static_cast<size_t>(x)] = 1;
      x = G.mul(x, g);
    } while (x != G.id());
  }
  std::vector<int> coset_rep(static_cast<size_t>(G.size()), -1);
  std::vector<int> reps;  // canonical reps in ascending order
  for (int x = 0; x < G.size(); ++x) {
    if (coset_rep[static_cast<size_t>(x)] >= 0) continue;
    // members of x<g>
    std::vector<int> mem;
    int y = x;
    do {
      mem.push_back(y);
      y = G.mul(y, g);
    } while (y != x);
    int rep = *std::min_element(mem.begin(), mem.end());
    for (int m : mem) coset_rep[static_cast<size_t>(m)] = rep;
    reps.push_back(rep);
  }
  std::sort(reps.begin(), reps.end());
  std::map<int, int> rep_index;
  for (size_t i = 0; i < reps.size(); ++i) rep_index[reps[i]] = static_cast<int>(i);

  FiniteGroup Q(
      static_cast<int>(reps.size()),
      rep_index.at(coset_rep[static_cast<size_t>(G.id())]),
      [&G, &reps, &coset_rep, &rep_index](int a, int b) {
        int prod = G.mul(reps[static_cast<size_t>(a)], reps[static_cast<size_t>(b)]);
        return rep_index.at(coset_rep[static_cast<size_t>(prod)]);
      },
      [&G, &reps, &coset_rep, &rep_index](int a) {
        int inv = G.inv(reps[static_cast<size_t>(a)]);
        return rep_index.at(coset_rep[static_cast<size_t>(inv)]);
      });
  Decomp sub = decompose(Q);

  for (size_t t = 0; t < sub.gens.size(); ++t) {
    int h = reps[static_cast<size_t>(sub.gens[t])];
    std::uint64_t d = sub.orders[t];
    // h^d lies in <g>; find c with h^d = g^c, then replace h by h g^{-c/d}.
    int hd = G.pow(h, d);
    std::uint64_t c = 0;
    int x = G.id();
    while (x != hd) {
      x = G.mul(x, g);
      ++c;
      if (c > d1) throw std::logic_error("abelian_structure: lift escaped <g>");
    }
    if (c % d != 0) throw std::logic_error("abelian_structure: non-integral correction");
    int adj = G.mul(h, G.pow(G.inv(g), c / d));
    if (G.pow(adj, d) != G.id() || G.order_of(adj) != d)
      throw std::logic_error("abelian_structure: corrected lift has wrong order");
    out.gens.push_back(adj);
    out.orders.push_back(d);
  }
  return out;
}

}  // namespace

AbelianStructure abelian_structure(const FiniteGroup& G) {
  if (G.size() > 10000) throw std::invalid_argument("abelian_structure: too large");
  for (int a = 0; a < G.size(); ++a)
    for (int b = a + 1; b < G.size(); ++b)
      if (G.mul(a, b) != G.mul(b, a))
        throw std::invalid_argument("abelian_structure: group is not abelian");

  Decomp dec = decompose(G);
  AbelianStructure S;
  S.gens = dec.gens;
  S.orders = dec.orders;

  // Exponent vectors for every element, by odometer enumeration of the
  // direct product (also proves the decomposition is internally direct).
  size_t t = S.gens.size();
  std::uint64_t total = 1;
  for (auto d : S.orders) total *= d;
  if (total != static_cast<std::uint64_t>(G.size()))
    throw std::logic_error("abelian_structure: factor orders do not multiply up");
  S.dlog.assign(static_cast<size_t>(G.size()), {});
  std::vector<std::uint64_t> e(t, 0);
  while (true) {
    int x = G.id();
    for (size_t i = 0; i < t; ++i) x = G.mul(x, G.pow(S.gens[i], e[i]));
    if (!S.dlog[static_cast<size_t>(x)].empty())
      throw std::logic_error("abelian_structure: decomposition not direct");
    if (x == G.id() && std::any_of(e.begin(), e.end(), [](std::uint64_t v) { return v != 0; }))
      throw std::logic_error("abelian_structure: decomposition not direct");
    S.dlog[static_cast<size_t>(x)] = e;
    // increment odometer (last coordinate fastest)
    size_t i = t;
    while (i > 0) {
      --i;
      if (++e[i] < S.orders[i]) break;
      e[i] = 0;
      if (i == 0) {
        for (size_t x2 = 0; x2 < S.dlog.size(); ++x2)
          if (S.dlog[x2].empty() && static_cast<int>(x2) != G.id())
            throw std::logic_error("abelian_structure: decomposition not exhaustive");
        return S;
      }
    }
    if (t == 0) break;
  }
  return S;  // trivial group
}

namespace {

AbelianChar build_char(const AbelianStructure& S, const FiniteGroup& G,
                       std::vector<std::uint64_t> expo) {
  AbelianChar ch;
  ch.expo = std::move(expo);
  ch.order = 1;
  for (size_t t = 0; t < S.orders.size(); ++t) {
    std::uint64_t d = S.orders[t], a = ch.expo[t] % d;
    if (a) ch.order = lcm_u64(ch.order, d / std::gcd(d, a));
  }
  ch.values.resize(static_cast<size_t>(G.size()));
  // chi(x) = prod_t zeta_{d_t}^{a_t e_t}; accumulate the phase in the
  // cyclic group of order `ord` = lcm of the d_t.
  std::uint64_t ord = 1;
  for (auto d : S.orders) ord = lcm_u64(ord, d);
  for (int x = 0; x < G.size(); ++x) {
    if (ord == 1) {
      ch.values[static_cast<size_t>(x)] = Cyclo(1L);
      continue;
    }
    std::uint64_t phase = 0;  // exponent of zeta_ord
    for (size_t t = 0; t < S.orders.size(); ++t) {
      std::uint64_t d = S.orders[t];
      std::uint64_t contrib = (ch.expo[t] % d) * (S.dlog[static_cast<size_t>(x)][t] % d) % d;
      phase = (phase + contrib * (ord / d)) % ord;
    }
    ch.values[static_cast<size_t>(x)] =
        Cyclo::root_of_unity(static_cast<long>(ord), static_cast<long>(phase));
  }
  return ch;
}

}  // namespace

std::vector<AbelianChar> all_characters(const FiniteGroup& G,
                                        const AbelianStructure& S) {
  std::vector<AbelianChar> out;
  size_t t = S.orders.size();
  std::vector<std::uint64_t> a(t, 0);
  while (true) {
    out.push_back(build_char(S, G, a));
    size_t i = t;
    bool done = true;
    while (i > 0) {
      --i;
      if (++a[i] < S.orders[i]) { done = false; break; }
      a[i] = 0;
    }
    if (done) break;
  }
  return out;
}

AbelianChar char_mul(const AbelianStructure& S, const FiniteGroup& G,
                     const AbelianChar& a, const AbelianChar& b) {
  std::vector<std::uint64_t> e(S.orders.size());
  for (size_t t = 0; t < e.size(); ++t)
    e[t] = (a.expo[t] + b.expo[t]) % S.orders[t];
  return build_char(S, G, std::move(e));
}

AbelianChar char_inv(const AbelianStructure& S, const FiniteGroup& G,
                     const AbelianChar& a) {
  std::vector<std::uint64_t> e(S.orders.size());
  for (size_t t = 0; t < e.size(); ++t)
    e[t] = (S.orders[t] - a.expo[t] % S.orders[t]) % S.orders[t];
  return build_char(S, G, std::move(e));
}

}  // namespace ringrep
