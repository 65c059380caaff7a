#include "ringrep/structcheck.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ringrep/detrng.hpp"

namespace ringrep {

namespace {

// Uniform element of valuation >= lvl (zero coefficients below lvl).
Re random_level_elt(const TruncRing& R, int lvl, DetRng& rng) {
  auto coeffs = R.tower().subfield(1);
  Re x{};
  for (int i = lvl; i < R.r(); ++i)
    x[i] = coeffs[rng.next(coeffs.size())];
  return x;
}

}  // namespace

TrialBlock commutation_trials(const TruncRing& R, const MatGroup& G,
                              long long trials, std::uint64_t seed) {
  TrialBlock blk;
  blk.name = "commutation identities";
  DetRng rng(seed);
  auto roots = G.all_roots();
  const int r = R.r();
  long long commute = 0, single = 0, opposite = 0;
  for (long long iter = 0; iter < trials; ++iter) {
    Root a = roots[rng.next(roots.size())];
    Root ap = roots[rng.next(roots.size())];
    int b = 0, c = 0;
    if (ap == root_negate(a)) {
      if (r == 1) {  // no admissible opposite-root levels at depth 1
        ap = a;
        b = 0;
        c = 0;
      } else {
        bool found = false;
        for (int tries = 0; tries < 64 && !found; ++tries) {
          b = static_cast<int>(rng.next(static_cast<std::uint64_t>(r)));
          c = static_cast<int>(rng.next(static_cast<std::uint64_t>(r)));
          found = (b + c >= r) || (b + c >= r - 1 && b + 2 * c >= r);
        }
        if (!found) {
          b = r - 1;
          c = 1;
        }
      }
    } else {
      b = static_cast<int>(rng.next(static_cast<std::uint64_t>(r)));
      c = static_cast<int>(rng.next(static_cast<std::uint64_t>(r)));
    }
    Re u = random_level_elt(R, b, rng);
    Re v = random_level_elt(R, c, rng);
    auto dec = G.commutation(a, u, b, ap, v, c);
    Mat x = G.root_elt(a, u), xp = G.root_elt(ap, v);
    Mat lhs = G.mul(x, xp);
    Mat rhs = G.mul(xp, x);
    for (const auto& f : dec.factors) rhs = G.mul(rhs, G.root_elt(f.first, f.second));
    if (dec.kind == MatGroup::CommCase::kOppositeRoots)
      rhs = G.mul(G.mul(rhs, dec.tau), dec.u);
    if (!(lhs == rhs)) ++blk.failures;
    switch (dec.kind) {
      case MatGroup::CommCase::kCommute: ++commute; break;
      case MatGroup::CommCase::kSingleRootFactor: ++single; break;
      case MatGroup::CommCase::kOppositeRoots: ++opposite; break;
    }
    ++blk.trials;
  }
  blk.counters = {{"commute", commute},
                  {"single-factor", single},
                  {"opposite", opposite}};
  return blk;
}

TrialBlock shift_trials(const FieldTower& F, const TruncRing& R,
                        const MatGroup& G, long long trials,
                        std::uint64_t seed) {
  TrialBlock blk;
  blk.name = "shift-past identity and torus-part additivity";
  if (R.r() < 2) {
    blk.note = "not applicable at depth 1";
    return blk;
  }
  DetRng rng(seed);
  auto pos = G.positive_roots();
  std::vector<Root> neg;
  for (const Root& p : pos) neg.push_back(root_negate(p));
  const int r = R.r();
  for (long long iter = 0; iter < trials; ++iter) {
    Root alpha = neg[rng.next(neg.size())];
    int a = 1 + static_cast<int>(rng.next(static_cast<std::uint64_t>(r - 1)));
    Mat xi = G.root_elt(alpha, random_level_elt(R, std::max(0, r - a - 1), rng));
    auto make_z = [&]() {
      Mat z = G.identity();
      for (const Root& beta : pos) {
        int lvl = root_height(beta) > root_height(alpha) ? a + 1 : a;
        z = G.mul(z, G.root_elt(beta, random_level_elt(R, std::min(lvl, r), rng)));
      }
      return z;
    };
    Mat z1 = make_z(), z2 = make_z();
    auto s1 = G.shift_past(alpha, xi, z1, a);
    auto s2 = G.shift_past(alpha, xi, z2, a);
    auto s12 = G.shift_past(alpha, xi, G.mul(z1, z2), a);
    Mat lhs = G.mul(xi, z1);
    Mat rhs = G.mul(G.mul(G.mul(z1, xi), s1.tau), s1.omega);
    bool ok = lhs == rhs && s12.tau_param == F.add(s1.tau_param, s2.tau_param);
    if (!ok) ++blk.failures;
    ++blk.trials;
  }
  return blk;
}

TrialBlock factorization_trials(const TruncRing& R, const MatGroup& G,
                                long long trials, std::uint64_t seed) {
  TrialBlock blk;
  blk.name = "factorization round-trip and leading support";
  if (R.r() < 2) {
    blk.note = "not applicable at depth 1 (no level-1 stratum)";
    return blk;
  }
  DetRng rng(seed);
  auto lex = G.positive_roots();
  // Two alternative height-respecting orders (identical to lex when there
  // is a single positive root).
  std::vector<Root> orderA = lex, orderB = lex;
  std::stable_sort(orderA.begin(), orderA.end(),
                   [](const Root& x, const Root& y) {
                     return root_height(x) < root_height(y);
                   });
  std::stable_sort(orderB.begin(), orderB.end(),
                   [](const Root& x, const Root& y) {
                     if (root_height(x) != root_height(y))
                       return root_height(x) < root_height(y);
                     return y.i < x.i || (y.i == x.i && y.j < x.j);
                   });
  auto support_from = [&](const std::vector<Root>& order, const Mat& z) {
    auto params = G.factor_unitriangular(z, order);
    int a = R.r();
    for (const Re& u : params) a = std::min(a, R.valuation(u));
    std::set<std::pair<int, int>> roots;
    for (size_t k = 0; k < order.size(); ++k) {
      if (R.valuation(params[k]) != a) continue;
      bool taller_ok = true;
      for (size_t l = 0; l < order.size(); ++l)
        if (root_height(order[l]) > root_height(order[k]) &&
            R.valuation(params[l]) < a + 1)
          taller_ok = false;
      if (taller_ok) roots.insert({order[k].i, order[k].j});
    }
    return std::make_pair(a, roots);
  };
  long long identity_draws = 0;
  for (long long iter = 0; iter < trials; ++iter) {
    Mat z = G.identity();
    for (const Root& beta : lex)
      z = G.mul(z, G.root_elt(beta, random_level_elt(R, 1, rng)));
    if (z == G.identity()) {
      ++identity_draws;
      continue;
    }
    bool ok = true;
    auto params = G.factor_unitriangular(z, lex);
    Mat rebuilt = G.identity();
    for (size_t k = 0; k < lex.size(); ++k)
      rebuilt = G.mul(rebuilt, G.root_elt(lex[k], params[k]));
    ok = ok && rebuilt == z;

    auto ls = G.leading_support(z);
    ok = ok && !ls.roots.empty();
    for (const Root& b : ls.roots)
      ok = ok && root_height(b) == root_height(ls.roots.front());
    auto cell = support_from(lex, z);
    ok = ok && cell.first == ls.level;
    std::set<std::pair<int, int>> got;
    for (const Root& b : ls.roots) got.insert({b.i, b.j});
    ok = ok && got == cell.second;
    // The cell is order-independent: the partition is well defined.
    ok = ok && support_from(orderA, z) == cell && support_from(orderB, z) == cell;
    if (!ok) ++blk.failures;
    ++blk.trials;
  }
  blk.counters = {{"identity-draws", identity_draws}};
  return blk;
}

TrialBlock exhaustive_uniqueness_block() {
  TrialBlock blk;
  blk.name = "exhaustive correction uniqueness (n=2, q=2, r=2)";
  FieldTower F = FieldTower::make(2, 1);
  TruncRing R(F, 1, 2);
  MatGroup G(R, 2);
  Root a{0, 1};
  auto cts = G.ct_alpha(a, 1);
  std::vector<Mat> level1;
  for (const Fe& w : F.subfield(1))
    level1.push_back(G.root_elt(a, R.monomial(w, 1)));
  for (const Re& u : R.elements(1))
    for (const Fe& t : F.subfield(1)) {
      Re v = R.monomial(t, 1);
      Mat x = G.root_elt(a, u), xp = G.root_elt(root_negate(a), v);
      Mat lhs = G.mul(x, xp), base = G.mul(xp, x);
      int solutions = 0;
      for (const Mat& tau : cts)
        for (const Mat& uu : level1)
          if (G.mul(G.mul(base, tau), uu) == lhs) ++solutions;
      auto dec = G.commutation(a, u, 0, root_negate(a), v, 1);
      bool ok = solutions == 1 &&
                G.mul(G.mul(base, dec.tau), dec.u) == lhs;
      if (!ok) ++blk.failures;
      ++blk.trials;
    }
  Root alpha{1, 0};
  auto ctsn = G.ct_alpha(alpha, 1);
  std::vector<Mat> omegas;
  for (const Fe& w : F.subfield(1))
    omegas.push_back(G.root_elt(alpha, R.monomial(w, 1)));
  for (const Re& u : R.elements(1)) {
    Mat xi = G.root_elt(alpha, u);
    for (const Fe& t : F.subfield(1)) {
      Mat z = G.root_elt(Root{0, 1}, R.monomial(t, 1));
      auto sh = G.shift_past(alpha, xi, z, 1);
      Mat lhs = G.mul(xi, z);
      int solutions = 0;
      for (const Mat& tau : ctsn)
        for (const Mat& om : omegas)
          if (G.mul(G.mul(G.mul(z, xi), tau), om) == lhs) ++solutions;
      bool ok = solutions == 1 &&
                G.mul(G.mul(G.mul(z, xi), sh.tau), sh.omega) == lhs;
      if (!ok) ++blk.failures;
      ++blk.trials;
    }
  }
  return blk;
}

TrialBlock partition_block(const TruncRing& R, const MatGroup& G) {
  TrialBlock blk;
  blk.name = "leading-support partition (exhaustive)";
  if (R.r() < 2) {
    blk.note = "not applicable at depth 1 (no level-1 stratum)";
    return blk;
  }
  auto pos = G.positive_roots();
  std::vector<Re> vals;
  for (const Re& x : R.elements(1))
    if (R.valuation(x) >= 1) vals.push_back(x);
  double size = 1;
  for (size_t k = 0; k < pos.size(); ++k) size *= static_cast<double>(vals.size());
  if (size > 4096) {
    blk.note = "level-1 stratum too large; covered by the sampled trials";
    return blk;
  }
  std::map<std::pair<int, std::set<std::pair<int, int>>>, long long> cells;
  std::vector<size_t> idx(pos.size(), 0);
  long long total = 0;
  while (true) {
    Mat z = G.identity();
    for (size_t k = 0; k < pos.size(); ++k)
      z = G.mul(z, G.root_elt(pos[k], vals[idx[k]]));
    if (!(z == G.identity())) {
      ++total;
      auto ls = G.leading_support(z);
      std::set<std::pair<int, int>> got;
      for (const Root& b : ls.roots) got.insert({b.i, b.j});
      bool ok = !ls.roots.empty();
      auto params = G.factor_unitriangular(z, pos);
      int a = R.r();
      for (const Re& u : params) a = std::min(a, R.valuation(u));
      ok = ok && a == ls.level;
      if (!ok) ++blk.failures;
      ++cells[{ls.level, got}];
      ++blk.trials;
    }
    size_t k = 0;
    while (k < idx.size() && ++idx[k] == vals.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  long long covered = 0;
  for (const auto& [cell, count] : cells) covered += count;
  if (covered != total) ++blk.failures;
  blk.counters = {{"elements", total},
                  {"cells", static_cast<long long>(cells.size())}};
  return blk;
}

}  // namespace ringrep
