#include "ringrep/gfield.hpp"

#include <algorithm>
#include <numeric>

#include "ringrep/numth.hpp"

namespace ringrep {
namespace {

// --- dense polynomial helpers over F_p (little-endian coefficient vectors,
// --- not normalized; used only during tower construction and inversion) ---

int pdeg(const std::vector<int>& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i] != 0) return i;
  return -1;
}

// r <- r mod g (g monic of degree dg after scaling), in place.
void pmod(std::vector<int>& r, const std::vector<int>& g, int p) {
  int dg = pdeg(g);
  int lead_inv = static_cast<int>(invmod_u64(static_cast<std::uint64_t>(g[dg]), p));
  for (int i = pdeg(r); i >= dg; i = pdeg(r)) {
    int c = r[i] * lead_inv % p;
    for (int j = 0; j <= dg; ++j) {
      int& ref = r[i - dg + j];
      ref = ((ref - c * g[j]) % p + p) % p;
    }
  }
}

std::vector<int> pmul(const std::vector<int>& a, const std::vector<int>& b, int p) {
  std::vector<int> r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return r;
}

// Monic polynomial of degree d with non-leading coefficients given by the
// little-endian base-p digits of n.
std::vector<int> nth_monic(std::uint64_t n, int d, int p) {
  std::vector<int> f(d + 1, 0);
  for (int i = 0; i < d; ++i) { f[i] = static_cast<int>(n % p); n /= p; }
  f[d] = 1;
  return f;
}

bool divides(const std::vector<int>& g, std::vector<int> f, int p) {
  pmod(f, g, p);
  return pdeg(f) < 0;
}

// Irreducibility over F_p by trial division against every monic polynomial
// of degree 1..deg/2.  deg <= 16 and p <= 5 in this library, so the divisor
// count stays below ~2^9 and this is instant.
bool is_irreducible(const std::vector<int>& f, int p) {
  int d = pdeg(f);
  if (d <= 0) return false;
  if (d == 1) return true;
  for (int dd = 1; dd <= d / 2; ++dd) {
    std::uint64_t count = ipow_u64(static_cast<std::uint64_t>(p),
                                   static_cast<unsigned>(dd));
    for (std::uint64_t n = 0; n < count; ++n)
      if (divides(nth_monic(n, dd, p), f, p)) return false;
  }
  return true;
}

// --- F_p linear algebra on K-dimensional coefficient vectors ---

struct PMat {  // column-major is unnecessary; rows of length K over F_p
  int K, p;
  std::vector<std::array<int, kMaxFieldDeg>> row;
  explicit PMat(int K_, int p_) : K(K_), p(p_), row(K_) {
    for (auto& r : row) r.fill(0);
  }
};

// Reduce [A | b] (b may be empty) to RREF in place; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<int>>& m, int p) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  int rows = static_cast<int>(m.size());
  int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) { sel = i; break; }
    if (sel < 0) continue;
    std::swap(m[r], m[sel]);
    int iv = static_cast<int>(invmod_u64(static_cast<std::uint64_t>(m[r][c]), p));
    for (int j = 0; j < cols; ++j) m[r][j] = m[r][j] * iv % p;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      int f = m[i][c];
      for (int j = 0; j < cols; ++j)
        m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

FieldTower FieldTower::make(int p, int K) {
  if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p)))
    throw std::invalid_argument("FieldTower: p must be prime");
  if (K < 1 || K > kMaxFieldDeg)
    throw std::invalid_argument("FieldTower: degree out of range");
  FieldTower t;
  t.p_ = p;
  t.K_ = K;
  t.size_ = ipow_u64(static_cast<std::uint64_t>(p), static_cast<unsigned>(K));

  std::uint64_t n = 0;
  std::vector<int> f;
  for (;; ++n) {
    f = nth_monic(n, K, p);
    if (is_irreducible(f, p)) break;
  }
  t.mod_.assign(f.begin(), f.begin() + K);

  // Reduction rows: x^{K+j} mod f for j = 0..K-2.
  t.red_.assign(std::max(0, K - 1), {});
  std::vector<int> cur(f.size(), 0);  // starts at x^{K-1}
  cur[K - 1] = 1;
  std::vector<int> xpoly = {0, 1};
  for (int j = 0; j < K - 1; ++j) {
    cur = pmul(cur, xpoly, p);
    pmod(cur, f, p);
    t.red_[j].fill(0);
    for (int i = 0; i < K; ++i)
      t.red_[j][i] = (i < static_cast<int>(cur.size())) ? cur[i] : 0;
    cur.resize(K);  // keep reduced representative for the next multiply
    std::vector<int> tmp(t.red_[j].begin(), t.red_[j].begin() + K);
    cur = tmp;
  }
  return t;
}

Fe FieldTower::gen() const {
  Fe a{};
  if (K_ == 1) return a;  // modulus is x itself, so the class of x is 0
  a[1] = 1;
  return a;
}

Fe FieldTower::from_int(long long n) const {
  Fe a{};
  long long r = n % p_;
  if (r < 0) r += p_;
  a[0] = static_cast<std::uint8_t>(r);
  return a;
}

bool FieldTower::is_zero(const Fe& a) const {
  for (int i = 0; i < K_; ++i)
    if (a[i] != 0) return false;
  return true;
}

Fe FieldTower::add(const Fe& a, const Fe& b) const {
  Fe r{};
  for (int i = 0; i < K_; ++i) {
    int v = a[i] + b[i];
    if (v >= p_) v -= p_;
    r[i] = static_cast<std::uint8_t>(v);
  }
  return r;
}

Fe FieldTower::sub(const Fe& a, const Fe& b) const {
  Fe r{};
  for (int i = 0; i < K_; ++i) {
    int v = a[i] - b[i];
    if (v < 0) v += p_;
    r[i] = static_cast<std::uint8_t>(v);
  }
  return r;
}

Fe FieldTower::neg(const Fe& a) const {
  Fe r{};
  for (int i = 0; i < K_; ++i)
    r[i] = static_cast<std::uint8_t>(a[i] == 0 ? 0 : p_ - a[i]);
  return r;
}

Fe FieldTower::mul(const Fe& a, const Fe& b) const {
  int acc[2 * kMaxFieldDeg - 1] = {};
  for (int i = 0; i < K_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < K_; ++j) acc[i + j] += a[i] * b[j];
  }
  for (int j = 2 * K_ - 2; j >= K_; --j) {
    int c = acc[j] % p_;
    if (c != 0)
      for (int i = 0; i < K_; ++i) acc[i] += c * red_[j - K_][i];
    acc[j] = 0;
  }
  Fe r{};
  for (int i = 0; i < K_; ++i) r[i] = static_cast<std::uint8_t>(acc[i] % p_);
  return r;
}

Fe FieldTower::inv(const Fe& a) const {
  if (is_zero(a)) throw std::domain_error("FieldTower::inv(0)");
  // Extended Euclid on (a, f) in F_p[x].
  std::vector<int> r0(mod_);
  r0.push_back(1);  // the full monic modulus
  std::vector<int> r1(K_);
  for (int i = 0; i < K_; ++i) r1[i] = a[i];
  std::vector<int> s0 = {0}, s1 = {1};
  while (pdeg(r1) > 0) {
    // r0 = q*r1 + r2 via repeated leading-term elimination, tracking s.
    std::vector<int> q(static_cast<size_t>(std::max(0, pdeg(r0) - pdeg(r1))) + 1, 0);
    std::vector<int> r2 = r0;
    int d1 = pdeg(r1);
    int linv = static_cast<int>(invmod_u64(static_cast<std::uint64_t>(r1[d1]), p_));
    for (int i = pdeg(r2); i >= d1; i = pdeg(r2)) {
      int c = r2[i] * linv % p_;
      q[i - d1] = c;
      for (int j = 0; j <= d1; ++j)
        r2[i - d1 + j] = ((r2[i - d1 + j] - c * r1[j]) % p_ + p_) % p_;
    }
    std::vector<int> qs1 = pmul(q, s1, p_);
    std::vector<int> s2(std::max(s0.size(), qs1.size()), 0);
    for (size_t i = 0; i < s2.size(); ++i) {
      int v = (i < s0.size() ? s0[i] : 0) - (i < qs1.size() ? qs1[i] : 0);
      s2[i] = (v % p_ + p_) % p_;
    }
    r0 = std::move(r1); r1 = std::move(r2);
    s0 = std::move(s1); s1 = std::move(s2);
  }
  int d = pdeg(r1);
  if (d != 0) throw std::domain_error("FieldTower::inv: gcd != 1");
  int c = static_cast<int>(invmod_u64(static_cast<std::uint64_t>(r1[0]), p_));
  std::vector<int> res = s1;
  for (auto& v : res) v = v * c % p_;
  std::vector<int> full(mod_);
  full.push_back(1);
  pmod(res, full, p_);
  Fe out{};
  for (int i = 0; i < K_ && i < static_cast<int>(res.size()); ++i)
    out[i] = static_cast<std::uint8_t>(res[i]);
  return out;
}

Fe FieldTower::pow(const Fe& a, std::uint64_t e) const {
  Fe r = one();
  Fe b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

Fe FieldTower::frob(const Fe& a, int e) const {
  if (e < 0) throw std::invalid_argument("FieldTower::frob: e < 0");
  Fe r = a;
  for (int i = 0; i < e; ++i)
    r = pow(r, static_cast<std::uint64_t>(p_));
  return r;
}

std::uint64_t FieldTower::encode(const Fe& a) const {
  std::uint64_t v = 0;
  for (int i = K_ - 1; i >= 0; --i) v = v * p_ + a[i];
  return v;
}

Fe FieldTower::decode(std::uint64_t v) const {
  Fe a{};
  for (int i = 0; i < K_; ++i) {
    a[i] = static_cast<std::uint8_t>(v % p_);
    v /= p_;
  }
  if (v != 0) throw std::invalid_argument("FieldTower::decode: out of range");
  return a;
}

std::vector<Fe> FieldTower::subfield(int d) const {
  if (d < 1 || K_ % d != 0)
    throw std::invalid_argument("FieldTower::subfield: d must divide deg");
  // Kernel of (frob^d - id) as an F_p-linear map on the power basis.
  std::vector<std::vector<int>> m(K_, std::vector<int>(K_, 0));
  for (int i = 0; i < K_; ++i) {
    Fe e{};
    e[i] = 1;
    Fe img = frob(e, d);
    for (int r = 0; r < K_; ++r)
      m[r][i] = ((img[r] - (r == i ? 1 : 0)) % p_ + p_) % p_;
  }
  std::vector<int> pivots = rref(m, p_);
  std::vector<bool> is_pivot(K_, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<Fe> basis;
  for (int c = 0; c < K_; ++c) {
    if (is_pivot[c]) continue;
    Fe v{};
    v[c] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) {
      int val = m[r][c];
      v[pivots[r]] = static_cast<std::uint8_t>((p_ - val) % p_);
    }
    basis.push_back(v);
  }
  if (static_cast<int>(basis.size()) != d)
    throw std::logic_error("FieldTower::subfield: unexpected kernel dimension");
  std::uint64_t total = ipow_u64(static_cast<std::uint64_t>(p_),
                                 static_cast<unsigned>(d));
  std::vector<Fe> out;
  out.reserve(total);
  for (std::uint64_t n = 0; n < total; ++n) {
    std::uint64_t m2 = n;
    Fe acc{};
    for (const Fe& b : basis) {
      int coef = static_cast<int>(m2 % p_);
      m2 /= p_;
      if (coef != 0) {
        Fe scaled = b;
        for (int i = 0; i < K_; ++i)
          scaled[i] = static_cast<std::uint8_t>(scaled[i] * coef % p_);
        acc = add(acc, scaled);
      }
    }
    out.push_back(acc);
  }
  std::sort(out.begin(), out.end(), [this](const Fe& a, const Fe& b) {
    return encode(a) < encode(b);
  });
  return out;
}

std::vector<Fe> FieldTower::solve_linear(
    const std::function<Fe(const Fe&)>& L, const Fe& c) const {
  std::vector<std::vector<int>> m(K_, std::vector<int>(K_ + 1, 0));
  for (int i = 0; i < K_; ++i) {
    Fe e{};
    e[i] = 1;
    Fe img = L(e);
    for (int r = 0; r < K_; ++r) m[r][i] = img[r];
  }
  for (int r = 0; r < K_; ++r) m[r][K_] = c[r];
  std::vector<int> pivots = rref(m, p_);
  // Inconsistent if some pivot landed in the augmented column.
  if (!pivots.empty() && pivots.back() == K_) return {};
  Fe particular{};
  for (size_t r = 0; r < pivots.size(); ++r)
    particular[pivots[r]] = static_cast<std::uint8_t>(m[r][K_]);
  std::vector<bool> is_pivot(K_, false);
  for (int cidx : pivots) is_pivot[cidx] = true;
  std::vector<Fe> basis;
  for (int cidx = 0; cidx < K_; ++cidx) {
    if (is_pivot[cidx]) continue;
    Fe v{};
    v[cidx] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = static_cast<std::uint8_t>((p_ - m[r][cidx]) % p_);
    basis.push_back(v);
  }
  std::uint64_t total = ipow_u64(static_cast<std::uint64_t>(p_),
                                 static_cast<unsigned>(basis.size()));
  if (total > (1u << 20))
    throw std::logic_error("FieldTower::solve_linear: kernel too large");
  std::vector<Fe> out;
  out.reserve(total);
  for (std::uint64_t n = 0; n < total; ++n) {
    std::uint64_t m2 = n;
    Fe acc = particular;
    for (const Fe& b : basis) {
      int coef = static_cast<int>(m2 % p_);
      m2 /= p_;
      if (coef != 0) {
        Fe scaled = b;
        for (int i = 0; i < K_; ++i)
          scaled[i] = static_cast<std::uint8_t>(scaled[i] * coef % p_);
        acc = add(acc, scaled);
      }
    }
    out.push_back(acc);
  }
  std::sort(out.begin(), out.end(), [this](const Fe& a, const Fe& b) {
    return encode(a) < encode(b);
  });
  return out;
}

std::uint64_t FieldTower::mult_order(const Fe& a) const {
  if (is_zero(a)) throw std::domain_error("FieldTower::mult_order(0)");
  std::uint64_t n = size_ - 1;
  std::uint64_t ord = n;
  for (const auto& [q, e] : factorize_u64(n)) {
    for (int i = 0; i < e; ++i) {
      std::uint64_t cand = ord / q;
      if (ord % q == 0 && is_zero(sub(pow(a, cand), one())))
        ord = cand;
      else
        break;
    }
  }
  return ord;
}

}  // namespace ringrep
