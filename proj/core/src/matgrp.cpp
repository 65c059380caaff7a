#include "ringrep/matgrp.hpp"

#include <algorithm>
#include <stdexcept>

namespace ringrep {

MatGroup::MatGroup(const TruncRing& ring, int n) : R_(&ring), n_(n) {
  if (n != 2 && n != 3)
    throw std::invalid_argument("MatGroup: n must be 2 or 3");
}

Mat MatGroup::identity() const {
  Mat m;
  m.n = n_;
  for (int i = 0; i < n_; ++i) m.at(i, i) = R_->one();
  return m;
}

Mat MatGroup::mul(const Mat& a, const Mat& b) const {
  Mat c;
  c.n = n_;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      Re s{};
      for (int k = 0; k < n_; ++k)
        s = R_->add(s, R_->mul(a.at(i, k), b.at(k, j)));
      c.at(i, j) = s;
    }
  return c;
}

Re MatGroup::det(const Mat& a) const {
  if (n_ == 2)
    return R_->sub(R_->mul(a.at(0, 0), a.at(1, 1)),
                   R_->mul(a.at(0, 1), a.at(1, 0)));
  Re s{};
  s = R_->add(s, R_->mul(a.at(0, 0), R_->sub(R_->mul(a.at(1, 1), a.at(2, 2)),
                                             R_->mul(a.at(1, 2), a.at(2, 1)))));
  s = R_->sub(s, R_->mul(a.at(0, 1), R_->sub(R_->mul(a.at(1, 0), a.at(2, 2)),
                                             R_->mul(a.at(1, 2), a.at(2, 0)))));
  s = R_->add(s, R_->mul(a.at(0, 2), R_->sub(R_->mul(a.at(1, 0), a.at(2, 1)),
                                             R_->mul(a.at(1, 1), a.at(2, 0)))));
  return s;
}

Mat MatGroup::inv(const Mat& a) const {
  Re d = det(a);
  Re dinv = R_->inv(d);  // throws if det is not a unit
  Mat c;
  c.n = n_;
  if (n_ == 2) {
    c.at(0, 0) = R_->mul(dinv, a.at(1, 1));
    c.at(0, 1) = R_->neg(R_->mul(dinv, a.at(0, 1)));
    c.at(1, 0) = R_->neg(R_->mul(dinv, a.at(1, 0)));
    c.at(1, 1) = R_->mul(dinv, a.at(0, 0));
    return c;
  }
  // Adjugate: c[j][i] = cofactor(i,j).
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      // Minor with rows {r0,r1}, cols {c0,c1} arranged so no sign is needed.
      Re m = R_->sub(R_->mul(a.at(r0, c0), a.at(r1, c1)),
                     R_->mul(a.at(r0, c1), a.at(r1, c0)));
      c.at(j, i) = R_->mul(dinv, m);
    }
  return c;
}

Mat MatGroup::conj(const Mat& g, const Mat& h) const {
  return mul(mul(h, g), inv(h));
}

Mat MatGroup::frobenius(const Mat& a, int e) const {
  Mat c;
  c.n = n_;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) c.at(i, j) = R_->frobenius(a.at(i, j), e);
  return c;
}

MatGroup::Key MatGroup::key(const Mat& a) const {
  Key k{};
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      k[static_cast<size_t>(3 * i + j)] = R_->encode(a.at(i, j));
  return k;
}

Mat MatGroup::from_key(const Key& k) const {
  Mat a;
  a.n = n_;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      a.at(i, j) = R_->decode(k[static_cast<size_t>(3 * i + j)]);
  return a;
}

std::vector<Mat> MatGroup::enumerate_sl(int d) const {
  std::vector<Re> elems = R_->elements(d);
  const std::uint64_t s = elems.size();
  std::uint64_t budget = 1;
  for (int i = 0; i < n_ * n_; ++i) {
    if (budget > 1000000000ull / s)
      throw std::invalid_argument("MatGroup::enumerate_sl: scan budget exceeded");
    budget *= s;
  }
  std::vector<Mat> out;
  std::vector<size_t> idx(static_cast<size_t>(n_ * n_), 0);
  Mat m;
  m.n = n_;
  for (;;) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        m.at(i, j) = elems[idx[static_cast<size_t>(n_ * i + j)]];
    if (det(m) == R_->one()) out.push_back(m);
    size_t t = 0;
    while (t < idx.size() && ++idx[t] == elems.size()) idx[t++] = 0;
    if (t == idx.size()) break;
  }
  std::sort(out.begin(), out.end(), [this](const Mat& a, const Mat& b) {
    return key(a) < key(b);
  });
  return out;
}

int MatGroup::stratum_index(const Mat& g) const {
  int v = R_->r();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      Re diff = (i == j) ? R_->sub(g.at(i, j), R_->one()) : g.at(i, j);
      v = std::min(v, R_->valuation(diff));
    }
  return v;
}

std::vector<Root> MatGroup::positive_roots() const {
  std::vector<Root> out;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) out.push_back(Root{i, j});
  return out;
}

std::vector<Root> MatGroup::all_roots() const {
  std::vector<Root> out = positive_roots();
  size_t npos = out.size();
  for (size_t k = 0; k < npos; ++k) out.push_back(root_negate(out[k]));
  return out;
}

Mat MatGroup::root_elt(const Root& a, const Re& u) const {
  if (a.i == a.j || a.i < 0 || a.j < 0 || a.i >= n_ || a.j >= n_)
    throw std::invalid_argument("MatGroup::root_elt: bad root");
  Mat m = identity();
  m.at(a.i, a.j) = R_->add(m.at(a.i, a.j), u);
  return m;
}

Mat MatGroup::torus_elt(const Root& a, const Re& t) const {
  if (a.i == a.j || a.i < 0 || a.j < 0 || a.i >= n_ || a.j >= n_)
    throw std::invalid_argument("MatGroup::torus_elt: bad root");
  Mat m = identity();
  m.at(a.i, a.i) = t;
  m.at(a.j, a.j) = R_->inv(t);
  return m;
}

std::vector<Mat> MatGroup::ct_alpha(const Root& a, int d) const {
  if (R_->r() < 2)
    throw std::invalid_argument("MatGroup::ct_alpha: needs length >= 2");
  std::vector<Mat> out;
  for (const Fe& s : R_->tower().subfield(d)) {
    Re t = R_->add(R_->one(), R_->monomial(s, R_->r() - 1));
    out.push_back(torus_elt(a, t));
  }
  return out;
}

Re MatGroup::root_param(const Root& a, const Mat& g) const {
  Re u = g.at(a.i, a.j);
  if (!(g == root_elt(a, u)))
    throw std::invalid_argument("MatGroup::root_param: not a root element");
  return u;
}

MatGroup::Commutation MatGroup::commutation(const Root& a, const Re& u, int b,
                                            const Root& ap, const Re& up,
                                            int c) const {
  const int r = R_->r();
  if (b < 0 || c < 0 || R_->valuation(u) < b || R_->valuation(up) < c)
    throw std::invalid_argument("MatGroup::commutation: level precondition");
  Mat x = root_elt(a, u), xp = root_elt(ap, up);
  Mat xxp = mul(x, xp), xpx = mul(xp, x);
  Commutation out;
  out.tau_param = Fe{};
  Mat D = mul(inv(xpx), xxp);
  if (ap == root_negate(a)) {
    // Opposite roots: the top-level correction exists under these level
    // conditions (they subsume b+c >= r, where the correction is trivial).
    if (b + c < r - 1 || b + 2 * c < r)
      throw std::invalid_argument(
          "MatGroup::commutation: opposite-root level conditions violated");
    out.kind = CommCase::kOppositeRoots;
    Re dii = R_->sub(D.at(a.i, a.i), R_->one());
    if (R_->valuation(dii) < r - 1 || R_->valuation(D.at(a.i, a.j)) < r - 1)
      throw std::logic_error("MatGroup::commutation: correction not at top level");
    out.tau_param = dii[r - 1];
    Re t = R_->add(R_->one(), R_->monomial(out.tau_param, r - 1));
    out.tau = torus_elt(a, t);
    out.u = root_elt(a, D.at(a.i, a.j));
    if (!(xxp == mul(mul(xpx, out.tau), out.u)))
      throw std::logic_error("MatGroup::commutation: verification failed");
    return out;
  }
  if (b + c >= r) {
    if (!(xxp == xpx))
      throw std::logic_error("MatGroup::commutation: high levels must commute");
    out.kind = CommCase::kCommute;
    return out;
  }
  // Distinct, non-opposite roots: the commutator is a single root factor
  // (or empty when the root positions do not compose).
  out.kind = CommCase::kSingleRootFactor;
  Mat rebuilt = xpx;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      Re entry = (i == j) ? R_->sub(D.at(i, j), R_->one()) : D.at(i, j);
      if (R_->is_zero(entry)) continue;
      if (i == j)
        throw std::logic_error("MatGroup::commutation: unexpected diagonal part");
      Root beta{i, j};
      bool composes = (a.j == ap.i && i == a.i && j == ap.j) ||
                      (ap.j == a.i && i == ap.i && j == a.j);
      if (!composes)
        throw std::logic_error("MatGroup::commutation: factor at non-composed root");
      if (R_->valuation(entry) < std::min(b + c, r))
        throw std::logic_error("MatGroup::commutation: factor below level b+c");
      out.factors.emplace_back(beta, entry);
      rebuilt = mul(rebuilt, root_elt(beta, entry));
    }
  if (!(xxp == rebuilt))
    throw std::logic_error("MatGroup::commutation: verification failed");
  return out;
}

MatGroup::Shift MatGroup::shift_past(const Root& alpha, const Mat& xi,
                                     const Mat& z, int a) const {
  const int r = R_->r();
  if (root_positive(alpha))
    throw std::invalid_argument("MatGroup::shift_past: root must be negative");
  if (a < 1 || a > r - 1)
    throw std::invalid_argument("MatGroup::shift_past: level a out of range");
  Re u = root_param(alpha, xi);  // validates the shape of xi
  if (R_->valuation(u) < r - a - 1)
    throw std::invalid_argument("MatGroup::shift_past: xi below level r-a-1");
  // Validate z: upper unitriangular, parameters at level a, taller-than-alpha
  // parameters at level a+1.
  std::vector<Root> order = positive_roots();  // lexicographic, heights ascend
  std::vector<Re> params = factor_unitriangular(z, order);
  for (size_t k = 0; k < order.size(); ++k) {
    int need = (root_height(order[k]) > root_height(alpha)) ? a + 1 : a;
    if (R_->valuation(params[k]) < need)
      throw std::invalid_argument("MatGroup::shift_past: z level precondition");
  }
  Mat xiz = mul(xi, z), zxi = mul(z, xi);
  Mat C = mul(inv(zxi), xiz);
  Re dii = R_->sub(C.at(alpha.i, alpha.i), R_->one());
  if (R_->valuation(dii) < r - 1)
    throw std::logic_error("MatGroup::shift_past: torus part not at top level");
  Shift out;
  out.tau_param = dii[r - 1];
  Re t = R_->add(R_->one(), R_->monomial(out.tau_param, r - 1));
  out.tau = torus_elt(alpha, t);
  out.omega = mul(inv(out.tau), C);
  // omega must be lower unitriangular and congruent to 1 at the top level.
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const Re& e = out.omega.at(i, j);
      if (i == j) {
        if (!(e == R_->one()))
          throw std::logic_error("MatGroup::shift_past: omega diagonal != 1");
      } else if (i < j) {
        if (!R_->is_zero(e))
          throw std::logic_error("MatGroup::shift_past: omega not lower triangular");
      } else if (R_->valuation(e) < r - 1) {
        throw std::logic_error("MatGroup::shift_past: omega below top level");
      }
    }
  if (!(xiz == mul(mul(zxi, out.tau), out.omega)))
    throw std::logic_error("MatGroup::shift_past: verification failed");
  return out;
}

std::vector<Re> MatGroup::factor_unitriangular(
    const Mat& z, const std::vector<Root>& order) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j) {
      const Re& e = z.at(i, j);
      if (i == j ? !(e == R_->one()) : !R_->is_zero(e))
        throw std::invalid_argument(
            "MatGroup::factor_unitriangular: not upper unitriangular");
    }
  std::vector<Root> pos = positive_roots();
  if (order.size() != pos.size())
    throw std::invalid_argument("MatGroup::factor_unitriangular: bad order");
  for (const Root& beta : pos)
    if (std::count(order.begin(), order.end(), beta) != 1)
      throw std::invalid_argument("MatGroup::factor_unitriangular: bad order");
  std::vector<Re> params;
  Mat w = z;
  for (const Root& beta : order) {
    Re ub = w.at(beta.i, beta.j);
    params.push_back(ub);
    w = mul(root_elt(beta, R_->neg(ub)), w);
  }
  // Left-peeling is only exact for orders where no later sub-product can
  // reoccupy an already-peeled position; verify rather than restrict.
  if (!(w == identity()))
    throw std::invalid_argument(
        "MatGroup::factor_unitriangular: order not admissible for this element");
  return params;
}

MatGroup::LeadingSupport MatGroup::leading_support(const Mat& z) const {
  const int r = R_->r();
  std::vector<Root> order = positive_roots();
  std::vector<Re> params = factor_unitriangular(z, order);
  int a = r;
  for (const Re& u : params) a = std::min(a, R_->valuation(u));
  if (a == r)
    throw std::invalid_argument("MatGroup::leading_support: z is the identity");
  if (a < 1)
    throw std::invalid_argument("MatGroup::leading_support: z not 1 mod eps");
  LeadingSupport out;
  out.level = a;
  for (size_t k = 0; k < order.size(); ++k) {
    if (R_->valuation(params[k]) != a) continue;
    bool taller_ok = true;
    for (size_t l = 0; l < order.size(); ++l)
      if (root_height(order[l]) > root_height(order[k]) &&
          R_->valuation(params[l]) < a + 1)
        taller_ok = false;
    if (taller_ok) out.roots.push_back(order[k]);
  }
  if (out.roots.empty())
    throw std::logic_error("MatGroup::leading_support: empty support");
  for (const Root& b : out.roots)
    if (root_height(b) != root_height(out.roots.front()))
      throw std::logic_error("MatGroup::leading_support: mixed heights");
  return out;
}

}  // namespace ringrep
