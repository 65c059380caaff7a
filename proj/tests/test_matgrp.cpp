#include "doctest.h"
#include "ringrep/detrng.hpp"
#include "ringrep/gfield.hpp"
#include "ringrep/matgrp.hpp"
#include "ringrep/trunc.hpp"

#include <map>
#include <set>
#include <unordered_set>

using namespace ringrep;

namespace {

struct Ctx {
  FieldTower F;
  TruncRing R;
  MatGroup G;
  Ctx(int p, int K, int qdeg, int r, int n)
      : F(FieldTower::make(p, K)), R(F, qdeg, r), G(R, n) {}
};

// Random ring element with valuation >= lvl, coefficients in subfield d.
Re random_level(const TruncRing& R, int d, int lvl, DetRng& rng) {
  auto coeffs = R.tower().subfield(d);
  Re x{};
  for (int i = lvl; i < R.r(); ++i)
    x[i] = coeffs[rng.next(coeffs.size())];
  return x;
}

}  // namespace

TEST_CASE("determinant-1 group orders over truncated rings") {
  // |SL_2| = q^{3(r-1)} (q^3 - q); |SL_3| = q^{8(r-1)} |SL_3(F_q)|.
  Ctx c22(2, 1, 1, 2, 2);
  auto g22 = c22.G.enumerate_sl(1);
  CHECK(g22.size() == 48);

  Ctx c31(3, 1, 1, 1, 2);
  CHECK(c31.G.enumerate_sl(1).size() == 24);

  Ctx c32(3, 1, 1, 2, 2);
  auto g32 = c32.G.enumerate_sl(1);
  CHECK(g32.size() == 648);

  Ctx c322(2, 1, 1, 2, 3);
  CHECK(c322.G.enumerate_sl(1).size() == 43008);  // 2^8 * 168

  // Group axioms, exhaustively on the order-48 group.
  std::unordered_set<MatGroup::Key, MatKeyHash> keys;
  for (const Mat& g : g22) keys.insert(c22.G.key(g));
  CHECK(keys.size() == 48);
  for (const Mat& g : g22) {
    CHECK(c22.G.det(g) == c22.R.one());
    CHECK(keys.count(c22.G.key(c22.G.inv(g))) == 1);
    CHECK(c22.G.mul(g, c22.G.inv(g)) == c22.G.identity());
    for (const Mat& h : g22)
      CHECK(keys.count(c22.G.key(c22.G.mul(g, h))) == 1);
  }

  // Closure spot check plus exact inverse on the order-648 group.
  std::unordered_set<MatGroup::Key, MatKeyHash> keys32;
  for (const Mat& g : g32) keys32.insert(c32.G.key(g));
  CHECK(keys32.size() == 648);
  for (size_t i = 0; i < g32.size(); i += 13)
    for (size_t j = 0; j < g32.size(); j += 17)
      CHECK(keys32.count(c32.G.key(c32.G.mul(g32[i], g32[j]))) == 1);
  for (const Mat& g : g32)
    CHECK(c32.G.mul(c32.G.inv(g), g) == c32.G.identity());

  // Budget guard.
  Ctx big(3, 12, 1, 2, 2);
  CHECK_THROWS(big.G.enumerate_sl(12));
}

TEST_CASE("congruence strata") {
  Ctx c(2, 1, 1, 2, 2);
  CHECK(c.G.stratum_index(c.G.identity()) == 2);
  Root a{0, 1};
  CHECK(c.G.stratum_index(c.G.root_elt(a, c.R.eps())) == 1);
  CHECK(c.G.stratum_index(c.G.root_elt(a, c.R.one())) == 0);
  std::map<int, int> sizes;
  for (const Mat& g : c.G.enumerate_sl(1)) ++sizes[c.G.stratum_index(g)];
  CHECK(sizes[0] == 40);
  CHECK(sizes[1] == 7);
  CHECK(sizes[2] == 1);
}

TEST_CASE("high-level root elements commute (exhaustive, q=2, r<=3)") {
  for (int n : {2, 3})
    for (int r : {2, 3}) {
      Ctx c(2, 1, 1, r, n);
      auto roots = c.G.all_roots();
      for (const Root& a : roots)
        for (const Root& ap : roots) {
          if (ap == root_negate(a)) continue;  // handled by the opposite case
          for (int b = 0; b <= r; ++b)
            for (int cc = std::max(0, r - b); cc <= r; ++cc)
              for (const Re& u : c.R.elements(1)) {
                if (c.R.valuation(u) < b) continue;
                for (const Re& v : c.R.elements(1)) {
                  if (c.R.valuation(v) < cc) continue;
                  auto dec = c.G.commutation(a, u, b, ap, v, cc);
                  CHECK(dec.kind == MatGroup::CommCase::kCommute);
                }
              }
        }
    }
}

TEST_CASE("commutator of composing roots is a single factor with the product parameter") {
  Ctx c(2, 1, 1, 2, 3);  // SL_3 over F_2[eps]/eps^2
  Root a{0, 1}, ap{1, 2};
  for (const Re& u : c.R.elements(1))
    for (const Re& v : c.R.elements(1)) {
      auto dec = c.G.commutation(a, u, 0, ap, v, 0);
      Re uv = c.R.mul(u, v);
      if (c.R.is_zero(uv)) {
        CHECK(dec.factors.empty());
      } else {
        REQUIRE(dec.factors.size() == 1);
        CHECK(dec.factors[0].first == Root{0, 2});
        CHECK(dec.factors[0].second == uv);
      }
    }
  // Non-composing pair: (0,1) against (0,2) — commutator is trivial.
  for (const Re& u : c.R.elements(1))
    for (const Re& v : c.R.elements(1)) {
      auto dec = c.G.commutation(a, u, 0, Root{0, 2}, v, 0);
      CHECK(dec.kind == MatGroup::CommCase::kSingleRootFactor);
      CHECK(dec.factors.empty());
    }
  // Same root: parameters add, commutator trivial.
  for (const Re& u : c.R.elements(1))
    for (const Re& v : c.R.elements(1)) {
      auto dec = c.G.commutation(a, u, 0, a, v, 0);
      CHECK(dec.factors.empty());
    }
}

TEST_CASE("opposite-root correction: exhaustive identity and uniqueness") {
  // q=3, r=2, b=c=1: everything commutes and the correction is trivial.
  Ctx c3(3, 1, 1, 2, 2);
  Root a{0, 1};
  for (const Fe& s : c3.F.subfield(1))
    for (const Fe& t : c3.F.subfield(1)) {
      Re u = c3.R.monomial(s, 1), v = c3.R.monomial(t, 1);
      auto dec = c3.G.commutation(a, u, 1, root_negate(a), v, 1);
      CHECK(dec.kind == MatGroup::CommCase::kOppositeRoots);
      CHECK(dec.tau == c3.G.identity());
      CHECK(dec.u == c3.G.identity());
    }
  // q=3, r=2, b=0, c=1: nontrivial corrections; verify the defining identity
  // against direct products (the method already self-verifies; re-check).
  for (const Re& u : c3.R.elements(1))
    for (const Fe& t : c3.F.subfield(1)) {
      Re v = c3.R.monomial(t, 1);
      auto dec = c3.G.commutation(a, u, 0, root_negate(a), v, 1);
      Mat x = c3.G.root_elt(a, u), xp = c3.G.root_elt(root_negate(a), v);
      Mat lhs = c3.G.mul(x, xp);
      Mat rhs = c3.G.mul(c3.G.mul(c3.G.mul(xp, x), dec.tau), dec.u);
      CHECK(lhs == rhs);
    }

  // q=2, r=2, b=0, c=1: uniqueness of (tau, u) by exhaustive scan over the
  // two finite groups.
  Ctx c2(2, 1, 1, 2, 2);
  auto cts = c2.G.ct_alpha(a, 1);
  std::vector<Mat> level1;
  for (const Fe& w : c2.F.subfield(1))
    level1.push_back(c2.G.root_elt(a, c2.R.monomial(w, 1)));
  for (const Re& u : c2.R.elements(1))
    for (const Fe& t : c2.F.subfield(1)) {
      Re v = c2.R.monomial(t, 1);
      Mat x = c2.G.root_elt(a, u), xp = c2.G.root_elt(root_negate(a), v);
      Mat lhs = c2.G.mul(x, xp), base = c2.G.mul(xp, x);
      int solutions = 0;
      for (const Mat& tau : cts)
        for (const Mat& uu : level1)
          if (c2.G.mul(c2.G.mul(base, tau), uu) == lhs) ++solutions;
      CHECK(solutions == 1);
      auto dec = c2.G.commutation(a, u, 0, root_negate(a), v, 1);
      CHECK(c2.G.mul(c2.G.mul(base, dec.tau), dec.u) == lhs);
    }

  // Level precondition violations are rejected.
  CHECK_THROWS_AS(
      c3.G.commutation(a, c3.R.one(), 0, root_negate(a), c3.R.one(), 0),
      std::invalid_argument);
}

TEST_CASE("shifting a negative root element past an upper unitriangular one") {
  // Exhaustive at SL_2, q=2, r=2, a=1, including uniqueness of (tau, omega).
  Ctx c(2, 1, 1, 2, 2);
  Root alpha{1, 0};
  auto cts = c.G.ct_alpha(alpha, 1);
  std::vector<Mat> omegas;
  for (const Fe& w : c.F.subfield(1))
    omegas.push_back(c.G.root_elt(alpha, c.R.monomial(w, 1)));
  for (const Re& u : c.R.elements(1)) {
    Mat xi = c.G.root_elt(alpha, u);
    for (const Fe& t : c.F.subfield(1)) {
      Mat z = c.G.root_elt(Root{0, 1}, c.R.monomial(t, 1));
      auto sh = c.G.shift_past(alpha, xi, z, 1);
      Mat lhs = c.G.mul(xi, z);
      Mat rhs = c.G.mul(c.G.mul(c.G.mul(z, xi), sh.tau), sh.omega);
      CHECK(lhs == rhs);
      int solutions = 0;
      for (const Mat& tau : cts)
        for (const Mat& om : omegas)
          if (c.G.mul(c.G.mul(c.G.mul(z, xi), tau), om) == lhs) ++solutions;
      CHECK(solutions == 1);
    }
  }
  CHECK_THROWS_AS(c.G.shift_past(Root{0, 1}, c.G.identity(), c.G.identity(), 1),
                  std::invalid_argument);
}

TEST_CASE("randomized shift trials at SL_3, q=2, r=3, with torus-part additivity") {
  Ctx c(2, 1, 1, 3, 3);
  DetRng rng(42);
  auto pos = c.G.positive_roots();
  auto neg_roots = std::vector<Root>{{1, 0}, {2, 1}, {2, 0}};
  int trials = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    Root alpha = neg_roots[rng.next(neg_roots.size())];
    int a = 1 + static_cast<int>(rng.next(static_cast<std::uint64_t>(c.R.r() - 1)));
    Re u = random_level(c.R, 1, c.R.r() - a - 1, rng);
    Mat xi = c.G.root_elt(alpha, u);
    auto make_z = [&]() {
      Mat z = c.G.identity();
      for (const Root& beta : pos) {
        int lvl = root_height(beta) > root_height(alpha) ? a + 1 : a;
        z = c.G.mul(z, c.G.root_elt(beta, random_level(c.R, 1, lvl, rng)));
      }
      return z;
    };
    Mat z1 = make_z(), z2 = make_z();
    auto s1 = c.G.shift_past(alpha, xi, z1, a);
    auto s2 = c.G.shift_past(alpha, xi, z2, a);
    auto s12 = c.G.shift_past(alpha, xi, c.G.mul(z1, z2), a);
    // tau parameters add: the correction is multiplicative in z.
    CHECK(s12.tau_param == c.F.add(s1.tau_param, s2.tau_param));
    ++trials;
  }
  CHECK(trials == 1000);
}

TEST_CASE("factorization of unitriangular elements and leading support") {
  Ctx c2(2, 1, 1, 2, 2);
  // SL_2: every nontrivial level-1 element is supported on the single root.
  for (const Fe& t : c2.F.subfield(1)) {
    if (c2.F.is_zero(t)) continue;
    Mat z = c2.G.root_elt(Root{0, 1}, c2.R.monomial(t, 1));
    auto ls = c2.G.leading_support(z);
    CHECK(ls.level == 1);
    REQUIRE(ls.roots.size() == 1);
    CHECK(ls.roots[0] == Root{0, 1});
  }
  CHECK_THROWS_AS(c2.G.leading_support(c2.G.identity()), std::invalid_argument);

  // SL_3, q=2, r=3: the level-1 unitriangular group has 4^3 = 64 elements;
  // the (level, support) cells cover the 63 nontrivial ones, and the
  // support is order-independent across the two height-respecting orders.
  Ctx c(2, 1, 1, 3, 3);
  std::vector<Root> lex = {{0, 1}, {0, 2}, {1, 2}};
  std::vector<Root> orderA = {{0, 1}, {1, 2}, {0, 2}};
  std::vector<Root> orderB = {{1, 2}, {0, 1}, {0, 2}};
  auto level1_elts = [&]() {
    std::vector<Mat> out;
    std::vector<Re> vals;
    for (const Re& x : c.R.elements(1))
      if (c.R.valuation(x) >= 1) vals.push_back(x);
    for (const Re& u01 : vals)
      for (const Re& u02 : vals)
        for (const Re& u12 : vals) {
          Mat z = c.G.mul(
              c.G.mul(c.G.root_elt(Root{0, 1}, u01), c.G.root_elt(Root{0, 2}, u02)),
              c.G.root_elt(Root{1, 2}, u12));
          out.push_back(z);
        }
    return out;
  }();
  CHECK(level1_elts.size() == 64);

  auto support_from = [&](const std::vector<Root>& order, const Mat& z) {
    auto params = c.G.factor_unitriangular(z, order);
    int a = c.R.r();
    for (const Re& u : params) a = std::min(a, c.R.valuation(u));
    std::set<std::pair<int, int>> roots;
    for (size_t k = 0; k < order.size(); ++k) {
      if (c.R.valuation(params[k]) != a) continue;
      bool taller_ok = true;
      for (size_t l = 0; l < order.size(); ++l)
        if (root_height(order[l]) > root_height(order[k]) &&
            c.R.valuation(params[l]) < a + 1)
          taller_ok = false;
      if (taller_ok) roots.insert({order[k].i, order[k].j});
    }
    return std::make_pair(a, roots);
  };

  std::map<std::pair<int, std::set<std::pair<int, int>>>, int> cells;
  int nontrivial = 0;
  for (const Mat& z : level1_elts) {
    if (z == c.G.identity()) continue;
    ++nontrivial;
    auto ls = c.G.leading_support(z);
    CHECK(!ls.roots.empty());
    for (const Root& b : ls.roots)
      CHECK(root_height(b) == root_height(ls.roots.front()));
    // Computed from the library's fixed lexicographic order...
    auto [a_lex, roots_lex] = support_from(lex, z);
    CHECK(a_lex == ls.level);
    // ...and stable across both height-respecting orders.
    CHECK(support_from(orderA, z) == support_from(orderB, z));
    CHECK(support_from(orderA, z).second == roots_lex);
    std::set<std::pair<int, int>> got;
    for (const Root& b : ls.roots) got.insert({b.i, b.j});
    CHECK(got == roots_lex);
    ++cells[{ls.level, got}];
  }
  CHECK(nontrivial == 63);
  int covered = 0;
  for (const auto& [cell, count] : cells) covered += count;
  CHECK(covered == 63);

  // Round trip: factor parameters rebuild the element in order.
  for (const Mat& z : level1_elts) {
    auto params = c.G.factor_unitriangular(z, lex);
    Mat rebuilt = c.G.identity();
    for (size_t k = 0; k < lex.size(); ++k)
      rebuilt = c.G.mul(rebuilt, c.G.root_elt(lex[k], params[k]));
    CHECK(rebuilt == z);
  }
}

TEST_CASE("Frobenius on matrices commutes with products") {
  Ctx c(2, 2, 1, 2, 2);  // coefficients in F_4, q = 2
  auto some = c.G.enumerate_sl(1);  // F-fixed subgroup
  for (const Mat& g : some) CHECK(c.G.frobenius(g) == g);
  // A non-fixed element: conjugate by a matrix with an F_4 entry.
  Fe w = c.F.gen();
  Mat h = c.G.root_elt(Root{0, 1}, c.R.constant(w));
  CHECK(!(c.G.frobenius(h) == h));
  for (size_t i = 0; i < some.size(); i += 5) {
    Mat m = c.G.mul(h, some[i]);
    CHECK(c.G.frobenius(c.G.mul(m, h)) ==
          c.G.mul(c.G.frobenius(m), c.G.frobenius(h)));
  }
}
