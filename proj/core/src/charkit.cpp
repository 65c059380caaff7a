#include "ringrep/charkit.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "ringrep/numth.hpp"

namespace ringrep {

namespace {

// ---- dense linear algebra over F_ell (ell < 2^31 so products fit u64) ----

using Row = std::vector<std::uint64_t>;
using Matx = std::vector<Row>;  // row-major, rectangular

Matx mat_zero(int r, int c) { return Matx(static_cast<size_t>(r), Row(static_cast<size_t>(c), 0)); }

// Reduced row echelon form in place; returns pivot column list.
std::vector<int> rref(Matx& m, std::uint64_t ell) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  int rows = static_cast<int>(m.size()), cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int sel = -1;
    for (int i = rank; i < rows; ++i)
      if (m[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) { sel = i; break; }
    if (sel < 0) continue;
    std::swap(m[static_cast<size_t>(sel)], m[static_cast<size_t>(rank)]);
    Row& pr = m[static_cast<size_t>(rank)];
    std::uint64_t inv = invmod_u64(pr[static_cast<size_t>(col)], ell);
    for (int j = col; j < cols; ++j)
      pr[static_cast<size_t>(j)] = mulmod_u64(pr[static_cast<size_t>(j)], inv, ell);
    for (int i = 0; i < rows; ++i) {
      if (i == rank) continue;
      std::uint64_t f = m[static_cast<size_t>(i)][static_cast<size_t>(col)];
      if (!f) continue;
      for (int j = col; j < cols; ++j) {
        std::uint64_t sub = mulmod_u64(f, pr[static_cast<size_t>(j)], ell);
        std::uint64_t& tgt = m[static_cast<size_t>(i)][static_cast<size_t>(j)];
        tgt = (tgt + ell - sub) % ell;
      }
    }
    pivots.push_back(col);
    ++rank;
  }
  return pivots;
}

// Kernel basis of a (rows x n) matrix, as vectors of length n.
std::vector<Row> kernel_basis(Matx m, std::uint64_t ell) {
  int n = m.empty() ? 0 : static_cast<int>(m[0].size());
  std::vector<int> pivots = rref(m, ell);
  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;
  std::vector<Row> ker;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    Row v(static_cast<size_t>(n), 0);
    v[static_cast<size_t>(free)] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) {
      std::uint64_t coef = m[r][static_cast<size_t>(free)];
      if (coef)
        v[static_cast<size_t>(pivots[r])] = ell - coef;
    }
    ker.push_back(std::move(v));
  }
  return ker;
}

// Solve A x = b for square-rank systems arising from full-column-rank A
// (rows x cols, rows >= cols).  Throws if inconsistent or underdetermined.
Row solve_full_rank(const Matx& a, const Row& b, std::uint64_t ell) {
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  Matx aug = mat_zero(rows, cols + 1);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug[static_cast<size_t>(i)][static_cast<size_t>(j)] = a[static_cast<size_t>(i)][static_cast<size_t>(j)];
    aug[static_cast<size_t>(i)][static_cast<size_t>(cols)] = b[static_cast<size_t>(i)];
  }
  std::vector<int> pivots = rref(aug, ell);
  Row x(static_cast<size_t>(cols), 0);
  for (size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == cols) throw std::runtime_error("solve_full_rank: inconsistent");
    x[static_cast<size_t>(pivots[r])] = aug[r][static_cast<size_t>(cols)];
  }
  if (static_cast<int>(pivots.size()) != cols)
    throw std::runtime_error("solve_full_rank: rank deficient");
  return x;
}

// Upper-Hessenberg reduction by similarity (Gaussian style), in place.
void hessenberg(Matx& h, std::uint64_t ell) {
  int n = static_cast<int>(h.size());
  for (int col = 0; col < n - 2; ++col) {
    int piv = -1;
    for (int i = col + 1; i < n; ++i)
      if (h[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != col + 1) {
      std::swap(h[static_cast<size_t>(piv)], h[static_cast<size_t>(col + 1)]);
      for (int i = 0; i < n; ++i)
        std::swap(h[static_cast<size_t>(i)][static_cast<size_t>(piv)],
                  h[static_cast<size_t>(i)][static_cast<size_t>(col + 1)]);
    }
    std::uint64_t inv = invmod_u64(h[static_cast<size_t>(col + 1)][static_cast<size_t>(col)], ell);
    for (int i = col + 2; i < n; ++i) {
      std::uint64_t f = mulmod_u64(h[static_cast<size_t>(i)][static_cast<size_t>(col)], inv, ell);
      if (!f) continue;
      // row_i -= f * row_{col+1};  col_{col+1} += f * col_i  (similarity)
      for (int j = 0; j < n; ++j) {
        std::uint64_t sub = mulmod_u64(f, h[static_cast<size_t>(col + 1)][static_cast<size_t>(j)], ell);
        std::uint64_t& tgt = h[static_cast<size_t>(i)][static_cast<size_t>(j)];
        tgt = (tgt + ell - sub) % ell;
      }
      for (int i2 = 0; i2 < n; ++i2) {
        std::uint64_t add = mulmod_u64(f, h[static_cast<size_t>(i2)][static_cast<size_t>(i)], ell);
        std::uint64_t& tgt = h[static_cast<size_t>(i2)][static_cast<size_t>(col + 1)];
        tgt = (tgt + add) % ell;
      }
    }
  }
}

// det(H - lambda I) for upper-Hessenberg H via the leading-principal-minor
// recurrence; O(n^2) per evaluation.
std::uint64_t hessenberg_charpoly_at(const Matx& h, std::uint64_t lambda,
                                     std::uint64_t ell) {
  int n = static_cast<int>(h.size());
  std::vector<std::uint64_t> d(static_cast<size_t>(n + 1), 0);
  d[0] = 1;
  for (int m = 1; m <= n; ++m) {
    std::uint64_t diag =
        (h[static_cast<size_t>(m - 1)][static_cast<size_t>(m - 1)] + ell - lambda) % ell;
    std::uint64_t acc = mulmod_u64(diag, d[static_cast<size_t>(m - 1)], ell);
    std::uint64_t subprod = 1;
    for (int i = m - 2; i >= 0; --i) {
      subprod = mulmod_u64(subprod,
                           h[static_cast<size_t>(i + 1)][static_cast<size_t>(i)], ell);
      if (!subprod) break;
      std::uint64_t term = mulmod_u64(h[static_cast<size_t>(i)][static_cast<size_t>(m - 1)],
                                      mulmod_u64(subprod, d[static_cast<size_t>(i)], ell), ell);
      // sign (-1)^{m-1-i}
      if ((m - 1 - i) % 2 == 1)
        acc = (acc + ell - term) % ell;
      else
        acc = (acc + term) % ell;
    }
    d[static_cast<size_t>(m)] = acc;
  }
  return d[static_cast<size_t>(n)];
}

std::uint64_t primitive_root(std::uint64_t ell) {
  auto fac = factorize_u64(ell - 1);
  for (std::uint64_t g = 2; g < ell; ++g) {
    bool ok = true;
    for (const auto& [p, e] : fac) {
      (void)e;
      if (powmod_u64(g, (ell - 1) / p, ell) == 1) { ok = false; break; }
    }
    if (ok) return g;
  }
  throw std::runtime_error("primitive_root: none found");
}

}  // namespace

// ---------------------------------------------------------------- FiniteGroup

FiniteGroup::FiniteGroup(int size, int identity, std::function<int(int, int)> mul,
                         std::function<int(int)> inv)
    : n_(size), id_(identity), mul_(std::move(mul)), inv_(std::move(inv)) {
  if (n_ <= 0) throw std::invalid_argument("FiniteGroup: empty");
  if (id_ < 0 || id_ >= n_) throw std::invalid_argument("FiniteGroup: bad identity");
  ord_.resize(static_cast<size_t>(n_));
  exponent_ = 1;
  for (int a = 0; a < n_; ++a) {
    std::uint64_t o = 1;
    int x = a;
    while (x != id_) {
      x = mul_(x, a);
      ++o;
      if (o > static_cast<std::uint64_t>(n_))
        throw std::runtime_error("FiniteGroup: oracle does not close");
    }
    ord_[static_cast<size_t>(a)] = o;
    exponent_ = lcm_u64(exponent_, o);
  }
}

int FiniteGroup::pow(int a, std::uint64_t e) const {
  e %= order_of(a);
  int acc = id_;
  int base = a;
  while (e) {
    if (e & 1) acc = mul_(acc, base);
    base = mul_(base, base);
    e >>= 1;
  }
  return acc;
}

FiniteGroup group_from_mats(const MatGroup& G,
                            std::shared_ptr<const std::vector<Mat>> elems) {
  auto index = std::make_shared<std::unordered_map<MatGroup::Key, int, MatKeyHash>>();
  index->reserve(elems->size() * 2);
  for (size_t i = 0; i < elems->size(); ++i)
    (*index)[G.key((*elems)[i])] = static_cast<int>(i);
  if (index->size() != elems->size())
    throw std::invalid_argument("group_from_mats: duplicate elements");
  auto idx_of = [index](const MatGroup& g, const Mat& m) {
    auto it = index->find(g.key(m));
    if (it == index->end())
      throw std::invalid_argument("group_from_mats: product leaves the list");
    return it->second;
  };
  int id = -1;
  Mat ident = G.identity();
  auto it = index->find(G.key(ident));
  if (it == index->end()) throw std::invalid_argument("group_from_mats: no identity");
  id = it->second;
  const MatGroup* Gp = &G;
  auto mul = [Gp, elems, idx_of](int a, int b) {
    return idx_of(*Gp, Gp->mul((*elems)[static_cast<size_t>(a)], (*elems)[static_cast<size_t>(b)]));
  };
  auto inv = [Gp, elems, idx_of](int a) {
    return idx_of(*Gp, Gp->inv((*elems)[static_cast<size_t>(a)]));
  };
  return FiniteGroup(static_cast<int>(elems->size()), id, mul, inv);
}

// ---------------------------------------------------------------- ConjClasses

ConjClasses ConjClasses::compute(const FiniteGroup& G) {
  int n = G.size();
  if (n > 100000) throw std::invalid_argument("ConjClasses: group too large");
  ConjClasses out;
  out.G_ = &G;
  out.class_of_.assign(static_cast<size_t>(n), -1);

  // Orbits of conjugation, scanning base points in index order.
  std::vector<std::vector<int>> members;
  for (int a = 0; a < n; ++a) {
    if (out.class_of_[static_cast<size_t>(a)] >= 0) continue;
    int c = static_cast<int>(members.size());
    std::vector<int> orb{a};
    out.class_of_[static_cast<size_t>(a)] = c;
    for (size_t head = 0; head < orb.size(); ++head) {
      int x = orb[head];
      for (int h = 0; h < n; ++h) {
        int y = G.mul(G.mul(h, x), G.inv(h));
        if (out.class_of_[static_cast<size_t>(y)] < 0) {
          out.class_of_[static_cast<size_t>(y)] = c;
          orb.push_back(y);
        }
      }
    }
    members.push_back(std::move(orb));
  }

  // Deterministic class order: (element order, size, least member).
  int k = static_cast<int>(members.size());
  std::vector<int> perm(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) perm[static_cast<size_t>(i)] = i;
  std::vector<ConjClass> raw(static_cast<size_t>(k));
  for (int c = 0; c < k; ++c) {
    const auto& mem = members[static_cast<size_t>(c)];
    int rep = *std::min_element(mem.begin(), mem.end());
    raw[static_cast<size_t>(c)] = ConjClass{rep, G.order_of(rep), static_cast<int>(mem.size())};
  }
  std::sort(perm.begin(), perm.end(), [&raw](int a, int b) {
    const ConjClass &x = raw[static_cast<size_t>(a)], &y = raw[static_cast<size_t>(b)];
    if (x.elt_order != y.elt_order) return x.elt_order < y.elt_order;
    if (x.size != y.size) return x.size < y.size;
    return x.rep < y.rep;
  });
  std::vector<int> newpos(static_cast<size_t>(k));
  out.classes_.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    newpos[static_cast<size_t>(perm[static_cast<size_t>(i)])] = i;
    out.classes_[static_cast<size_t>(i)] = raw[static_cast<size_t>(perm[static_cast<size_t>(i)])];
  }
  for (int a = 0; a < n; ++a)
    out.class_of_[static_cast<size_t>(a)] =
        newpos[static_cast<size_t>(out.class_of_[static_cast<size_t>(a)])];

  out.inv_class_.resize(static_cast<size_t>(k));
  for (int c = 0; c < k; ++c)
    out.inv_class_[static_cast<size_t>(c)] =
        out.class_of_[static_cast<size_t>(G.inv(out.classes_[static_cast<size_t>(c)].rep))];
  return out;
}

// -------------------------------------------------------------- ClassFunction

ClassFunction::ClassFunction(const ConjClasses* cls, std::vector<Cyclo> vals)
    : cls_(cls), vals_(std::move(vals)) {
  if (static_cast<int>(vals_.size()) != cls_->num())
    throw std::invalid_argument("ClassFunction: wrong length");
}

ClassFunction ClassFunction::operator+(const ClassFunction& o) const {
  std::vector<Cyclo> v(vals_.size());
  for (size_t i = 0; i < vals_.size(); ++i) v[i] = vals_[i] + o.vals_[i];
  return ClassFunction(cls_, std::move(v));
}

ClassFunction ClassFunction::operator-(const ClassFunction& o) const {
  std::vector<Cyclo> v(vals_.size());
  for (size_t i = 0; i < vals_.size(); ++i) v[i] = vals_[i] - o.vals_[i];
  return ClassFunction(cls_, std::move(v));
}

ClassFunction ClassFunction::scaled(const Cyclo& s) const {
  std::vector<Cyclo> v(vals_.size());
  for (size_t i = 0; i < vals_.size(); ++i) v[i] = vals_[i] * s;
  return ClassFunction(cls_, std::move(v));
}

bool ClassFunction::operator==(const ClassFunction& o) const {
  if (vals_.size() != o.vals_.size()) return false;
  for (size_t i = 0; i < vals_.size(); ++i)
    if (vals_[i] != o.vals_[i]) return false;
  return true;
}

Cyclo inner_product_cyclo(const ClassFunction& f, const ClassFunction& g) {
  const ConjClasses& cls = f.classes();
  Cyclo acc;
  for (int c = 0; c < cls.num(); ++c)
    acc += f.value(c) * g.value(c).conj() * Cyclo(static_cast<long>(cls.cls(c).size));
  mpq_class order(cls.group().size());
  return acc * Cyclo(mpq_class(1) / order);
}

mpq_class inner_product(const ClassFunction& f, const ClassFunction& g) {
  Cyclo v = inner_product_cyclo(f, g);
  if (!v.is_rational())
    throw std::domain_error("inner_product: value is not rational");
  return v.rational_value();
}

// ------------------------------------------------------------- CharacterTable

CharacterTable CharacterTable::compute(const ConjClasses& cls) {
  const FiniteGroup& G = cls.group();
  int k = cls.num();
  std::uint64_t n = static_cast<std::uint64_t>(G.size());
  std::uint64_t e = G.exponent();
  if (e > 10000) throw std::invalid_argument("CharacterTable: exponent too large");

  // Identity class must sit first (order-1 element sorts least).
  if (cls.cls(0).elt_order != 1 || cls.cls(0).size != 1)
    throw std::logic_error("CharacterTable: identity class not first");

  // Class-multiplication structure constants a[i][j][l]:
  // #{(x,y) in C_i x C_j : xy = rep_l}.  Computed by scanning all elements
  // once per target class via x -> x^{-1} rep_l.
  std::vector<std::vector<int>> members(static_cast<size_t>(k));
  for (int a = 0; a < G.size(); ++a)
    members[static_cast<size_t>(cls.class_of(a))].push_back(a);
  // Stored as P_i[j][l] = a_{ijl} so that the central-character vector
  // w = (omega(l))_l satisfies P_i w = omega(i) w: the class-sum identity
  // K_i K_j = sum_l a_{ijl} K_l gives omega(i) omega(j) = sum_l a_{ijl}
  // omega(l) under any central character.
  std::vector<Matx> P(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) P[static_cast<size_t>(i)] = mat_zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int l = 0; l < k; ++l) {
      int target = cls.cls(l).rep;
      for (int x : members[static_cast<size_t>(i)]) {
        int y = G.mul(G.inv(x), target);
        int j = cls.class_of(y);
        ++P[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(l)];
      }
    }
  }

  // Choose the working prime: ell = 1 mod e, ell coprime to |G|,
  // ell > 2 sqrt(|G|).
  std::uint64_t ell = 0;
  {
    std::uint64_t lo = 3;
    while (lo * lo <= 4 * n) ++lo;  // smallest lo with lo^2 > 4n
    std::uint64_t cand = e + 1;
    while (true) {
      if (cand >= lo && is_prime_u64(cand) && n % cand != 0) { ell = cand; break; }
      cand += e;
    }
  }

  // Simultaneous diagonalization: refine the full space by eigenspaces of
  // each P_i until every block is one-dimensional.
  std::vector<Matx> spaces;  // each: list of basis vectors (length k)
  {
    Matx full;
    for (int j = 0; j < k; ++j) {
      Row v(static_cast<size_t>(k), 0);
      v[static_cast<size_t>(j)] = 1;
      full.push_back(std::move(v));
    }
    spaces.push_back(std::move(full));
  }
  for (int i = 1; i < k; ++i) {
    bool all_one = true;
    for (const auto& s : spaces)
      if (s.size() > 1) { all_one = false; break; }
    if (all_one) break;
    std::vector<Matx> next;
    for (auto& B : spaces) {
      int s = static_cast<int>(B.size());
      if (s == 1) { next.push_back(std::move(B)); continue; }
      // Restriction S of P_i to span(B): columns solve B^T S_col = P_i b.
      // Assemble A = B^T as k x s, then solve per column.
      Matx A = mat_zero(k, s);
      for (int r = 0; r < s; ++r)
        for (int c = 0; c < k; ++c)
          A[static_cast<size_t>(c)][static_cast<size_t>(r)] = B[static_cast<size_t>(r)][static_cast<size_t>(c)];
      Matx S = mat_zero(s, s);
      const Matx& Pi = P[static_cast<size_t>(i)];
      for (int col = 0; col < s; ++col) {
        Row pb(static_cast<size_t>(k), 0);
        for (int r = 0; r < k; ++r) {
          std::uint64_t acc = 0;
          for (int c = 0; c < k; ++c)
            acc = (acc + mulmod_u64(Pi[static_cast<size_t>(r)][static_cast<size_t>(c)],
                                    B[static_cast<size_t>(col)][static_cast<size_t>(c)], ell)) % ell;
          pb[static_cast<size_t>(r)] = acc;
        }
        Row x = solve_full_rank(A, pb, ell);
        for (int r = 0; r < s; ++r) S[static_cast<size_t>(r)][static_cast<size_t>(col)] = x[static_cast<size_t>(r)];
      }
      // Eigenvalues of S via Hessenberg charpoly scan over F_ell.
      Matx H = S;
      hessenberg(H, ell);
      std::vector<std::uint64_t> roots;
      for (std::uint64_t lam = 0; lam < ell; ++lam)
        if (hessenberg_charpoly_at(H, lam, ell) == 0) roots.push_back(lam);
      for (std::uint64_t lam : roots) {
        Matx SmL = S;
        for (int d = 0; d < s; ++d)
          SmL[static_cast<size_t>(d)][static_cast<size_t>(d)] =
              (SmL[static_cast<size_t>(d)][static_cast<size_t>(d)] + ell - lam) % ell;
        std::vector<Row> ker = kernel_basis(SmL, ell);
        if (ker.empty()) throw std::runtime_error("CharacterTable: empty eigenspace");
        Matx sub;
        for (const Row& coef : ker) {
          Row v(static_cast<size_t>(k), 0);
          for (int r = 0; r < s; ++r) {
            if (!coef[static_cast<size_t>(r)]) continue;
            for (int c = 0; c < k; ++c)
              v[static_cast<size_t>(c)] =
                  (v[static_cast<size_t>(c)] +
                   mulmod_u64(coef[static_cast<size_t>(r)], B[static_cast<size_t>(r)][static_cast<size_t>(c)], ell)) % ell;
          }
          sub.push_back(std::move(v));
        }
        next.push_back(std::move(sub));
      }
    }
    spaces = std::move(next);
  }
  if (static_cast<int>(spaces.size()) != k)
    throw std::runtime_error("CharacterTable: refinement did not separate");

  // Central characters: normalize so the identity-class coordinate is 1.
  std::vector<Row> omega;
  for (const auto& B : spaces) {
    Row w = B[0];
    if (w[0] == 0) throw std::runtime_error("CharacterTable: degenerate vector");
    std::uint64_t inv = invmod_u64(w[0], ell);
    for (auto& x : w) x = mulmod_u64(x, inv, ell);
    omega.push_back(std::move(w));
  }

  // Degrees: d^2 = |G| / sum_j omega_j omega_{j*} / |C_j|  (all mod ell),
  // with the unique integer square root <= sqrt(|G|).
  std::uint64_t nmod = n % ell;
  std::vector<long> degrees(static_cast<size_t>(k));
  for (int t = 0; t < k; ++t) {
    std::uint64_t s = 0;
    for (int j = 0; j < k; ++j) {
      std::uint64_t term = mulmod_u64(omega[static_cast<size_t>(t)][static_cast<size_t>(j)],
                                      omega[static_cast<size_t>(t)][static_cast<size_t>(cls.inverse_class(j))], ell);
      term = mulmod_u64(term, invmod_u64(static_cast<std::uint64_t>(cls.cls(j).size) % ell, ell), ell);
      s = (s + term) % ell;
    }
    std::uint64_t d2 = mulmod_u64(nmod, invmod_u64(s, ell), ell);
    long d = -1;
    for (long c = 1; static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(c) <= n; ++c)
      if (mulmod_u64(static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(c), ell) == d2) { d = c; break; }
    if (d < 0) throw std::runtime_error("CharacterTable: no degree matches");
    degrees[static_cast<size_t>(t)] = d;
  }

  // chi-bar values mod ell: chi(g_j) = d * omega_j / |C_j|.
  std::vector<Row> chibar(static_cast<size_t>(k), Row(static_cast<size_t>(k), 0));
  for (int t = 0; t < k; ++t)
    for (int j = 0; j < k; ++j)
      chibar[static_cast<size_t>(t)][static_cast<size_t>(j)] =
          mulmod_u64(mulmod_u64(static_cast<std::uint64_t>(degrees[static_cast<size_t>(t)]) % ell,
                                omega[static_cast<size_t>(t)][static_cast<size_t>(j)], ell),
                     invmod_u64(static_cast<std::uint64_t>(cls.cls(j).size) % ell, ell), ell);

  // Lift to exact cyclotomic values: the multiplicity of zeta_o^s in
  // chi(g_j) is m_s = (1/o) sum_t chi-bar(class(g_j^t)) z_o^{-st}, where
  // z_o has multiplicative order o mod ell matching zeta_o.
  std::uint64_t zgen = primitive_root(ell);
  std::vector<ClassFunction> rows;
  for (int t = 0; t < k; ++t) {
    std::vector<Cyclo> vals(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
      std::uint64_t o = cls.cls(j).elt_order;
      std::uint64_t zo = powmod_u64(zgen, (ell - 1) / o, ell);
      std::uint64_t zo_inv = invmod_u64(zo, ell);
      // class of rep^u for u = 0..o-1
      std::vector<int> pow_class(static_cast<size_t>(o));
      for (std::uint64_t u = 0; u < o; ++u)
        pow_class[static_cast<size_t>(u)] = cls.class_of(G.pow(cls.cls(j).rep, u));
      Cyclo val;
      std::uint64_t oinv = invmod_u64(o % ell, ell);
      for (std::uint64_t s2 = 0; s2 < o; ++s2) {
        std::uint64_t acc = 0;
        std::uint64_t zpow = 1;  // zo^{-s2*u}
        std::uint64_t step = powmod_u64(zo_inv, s2, ell);
        for (std::uint64_t u = 0; u < o; ++u) {
          acc = (acc + mulmod_u64(chibar[static_cast<size_t>(t)][static_cast<size_t>(pow_class[static_cast<size_t>(u)])], zpow, ell)) % ell;
          zpow = mulmod_u64(zpow, step, ell);
        }
        std::uint64_t ms = mulmod_u64(acc, oinv, ell);
        if (ms > static_cast<std::uint64_t>(degrees[static_cast<size_t>(t)]))
          throw std::runtime_error("CharacterTable: multiplicity lift out of range");
        if (ms)
          val += Cyclo::root_of_unity(static_cast<long>(o), static_cast<long>(s2)) *
                 Cyclo(static_cast<long>(ms));
      }
      vals[static_cast<size_t>(j)] = std::move(val);
    }
    rows.emplace_back(&cls, std::move(vals));
  }

  // Deterministic row order: by degree, then lexicographic on values.
  std::vector<int> perm(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) perm[static_cast<size_t>(i)] = i;
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    if (degrees[static_cast<size_t>(a)] != degrees[static_cast<size_t>(b)])
      return degrees[static_cast<size_t>(a)] < degrees[static_cast<size_t>(b)];
    for (int j = 0; j < k; ++j) {
      int c = Cyclo::compare(rows[static_cast<size_t>(a)].value(j), rows[static_cast<size_t>(b)].value(j));
      if (c) return c < 0;
    }
    return false;
  });

  CharacterTable out;
  out.cls_ = &cls;
  out.ell_ = ell;
  for (int i = 0; i < k; ++i) {
    out.rows_.push_back(rows[static_cast<size_t>(perm[static_cast<size_t>(i)])]);
    out.degrees_.push_back(degrees[static_cast<size_t>(perm[static_cast<size_t>(i)])]);
  }

  // Consistency proofs before handing the table out.
  {
    std::uint64_t sum = 0;
    for (int i = 0; i < k; ++i) {
      long d = out.degrees_[static_cast<size_t>(i)];
      sum += static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
      if (!(out.rows_[static_cast<size_t>(i)].value(0) == Cyclo(d)))
        throw std::runtime_error("CharacterTable: identity value != degree");
    }
    if (sum != n) throw std::runtime_error("CharacterTable: degree check failed");
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        Cyclo ip = inner_product_cyclo(out.rows_[static_cast<size_t>(i)], out.rows_[static_cast<size_t>(j)]);
        if (!(ip == (i == j ? Cyclo(1) : Cyclo())))
          throw std::runtime_error("CharacterTable: orthogonality failed");
      }
  }
  return out;
}

std::vector<mpq_class> CharacterTable::decompose(const ClassFunction& f) const {
  std::vector<mpq_class> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(inner_product(f, r));
  return out;
}

// ------------------------------------------------------------------- isotypic

ClassFunction isotypic_component(const ConjClasses& cls,
                                 const std::vector<std::vector<Cyclo>>& chi,
                                 const FiniteGroup& Gamma,
                                 const std::vector<Cyclo>& omega) {
  int k = cls.num();
  int m = Gamma.size();
  if (static_cast<int>(chi.size()) != k ||
      static_cast<int>(omega.size()) != m)
    throw std::invalid_argument("isotypic_component: shape mismatch");
  std::vector<Cyclo> vals(static_cast<size_t>(k));
  Cyclo scale(mpq_class(1) / mpq_class(m));
  for (int c = 0; c < k; ++c) {
    if (static_cast<int>(chi[static_cast<size_t>(c)].size()) != m)
      throw std::invalid_argument("isotypic_component: shape mismatch");
    Cyclo acc;
    for (int t = 0; t < m; ++t)
      acc += omega[static_cast<size_t>(Gamma.inv(t))] * chi[static_cast<size_t>(c)][static_cast<size_t>(t)];
    vals[static_cast<size_t>(c)] = acc * scale;
  }
  return ClassFunction(&cls, std::move(vals));
}

}  // namespace ringrep
