#include "ringrep/torus.hpp"

#include <algorithm>
#include <stdexcept>

#include "ringrep/numth.hpp"

namespace ringrep {

namespace {

constexpr int kTowerDeg = 12;
const Root kRoot01{0, 1};

bool divides(int a, int b) { return b % a == 0; }

}  // namespace

TorusAmbient::TorusAmbient(int q_, int r_)
    : tower(FieldTower::make(q_, kTowerDeg)),
      ring(tower, 1, r_),
      group(ring, 2),
      q(q_),
      r(r_) {
  if (q_ != 2 && q_ != 3 && q_ != 5)
    throw std::invalid_argument("TorusAmbient: q must be 2, 3, or 5");
  if (r_ < 1 || r_ > 2)
    throw std::invalid_argument("TorusAmbient: r must be 1 or 2");
  nu = group.identity();
  nu.at(0, 0) = ring.zero();
  nu.at(1, 1) = ring.zero();
  nu.at(0, 1) = ring.neg(ring.one());
  nu.at(1, 0) = ring.one();
}

std::shared_ptr<TorusAmbient> make_torus_ambient(int q, int r) {
  return std::make_shared<TorusAmbient>(q, r);
}

Torus::Torus(std::shared_ptr<TorusAmbient> amb, TorusKind kind)
    : amb_(std::move(amb)), kind_(kind) {
  const FieldTower& F = amb_->tower;
  const TruncRing& R = amb_->ring;
  const MatGroup& G = amb_->group;
  int q = amb_->q, r = amb_->r;

  if (kind_ == TorusKind::kSplit) {
    gamma_ = G.identity();
    gamma_deg_ = 1;
  } else {
    // gamma = [[a, a^q],[c, c^q]] with a^{q^2} = -a, c^{q^2} = -c and
    // determinant a c^q - a^q c = 1 solves F(gamma) = gamma nu entrywise;
    // scan the kernel of x -> x^{q^2} + x for the lexicographically least
    // solution pair.
    std::vector<Fe> ker = F.solve_linear(
        [&F](const Fe& x) { return F.add(F.frob(x, 2), x); }, F.zero());
    bool found = false;
    for (const Fe& a : ker) {
      if (F.is_zero(a)) continue;
      for (const Fe& c : ker) {
        if (F.is_zero(c)) continue;
        Fe det = F.sub(F.mul(a, F.frob(c)), F.mul(F.frob(a), c));
        if (det == F.one()) {
          gamma_ = G.identity();
          gamma_.at(0, 0) = R.constant(a);
          gamma_.at(0, 1) = R.constant(F.frob(a));
          gamma_.at(1, 0) = R.constant(c);
          gamma_.at(1, 1) = R.constant(F.frob(c));
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found)
      throw std::logic_error("Torus: no conjugator found (contract violation)");
    if (!(G.mul(G.inv(gamma_), G.frobenius(gamma_)) == amb_->nu))
      throw std::logic_error("Torus: conjugator fails gamma^{-1}F(gamma) = nu");
    gamma_deg_ = kTowerDeg;
    for (int m : {1, 2, 3, 4, 6}) {
      bool fixed = true;
      for (int i = 0; i < 2 && fixed; ++i)
        for (int jj = 0; jj < 2 && fixed; ++jj)
          if (!(R.frobenius(gamma_.at(i, jj), m) == gamma_.at(i, jj)))
            fixed = false;
      if (fixed) { gamma_deg_ = m; break; }
    }
  }

  // Enumerate T_r^F.  Split: diag(t, t^{-1}) for F-fixed units t.
  // Non-split: gamma diag(t, t^{-1}) gamma^{-1} is F-fixed iff F(t) = t^{-1}
  // (conjugation by nu inverts the diagonal); such t are F^2-fixed, so
  // scanning units with coefficients in the degree-2 subfield is complete.
  if (kind_ == TorusKind::kSplit) {
    for (const Re& u : R.units(1))
      elems_.push_back(G.torus_elt(kRoot01, u));
  } else {
    for (const Re& u : R.units(2))
      if (R.mul(u, R.frobenius(u)) == R.one())
        elems_.push_back(G.conj(G.torus_elt(kRoot01, u), gamma_));
  }
  std::sort(elems_.begin(), elems_.end(),
            [&G](const Mat& x, const Mat& y) { return G.key(x) < G.key(y); });
  for (size_t i = 0; i < elems_.size(); ++i)
    index_[G.key(elems_[i])] = static_cast<int>(i);

  std::uint64_t expect =
      kind_ == TorusKind::kSplit
          ? static_cast<std::uint64_t>(q - 1) * ipow_u64(q, r - 1)
          : static_cast<std::uint64_t>(q + 1) * ipow_u64(q, r - 1);
  if (elems_.size() != expect)
    throw std::logic_error("Torus: |T_r^F| does not match q^{r-1}(q -+ 1)");
  for (const Mat& t : elems_)
    if (!(G.frobenius(t) == t))
      throw std::logic_error("Torus: enumerated element not F-fixed");

  elems_shared_ = std::make_shared<const std::vector<Mat>>(elems_);
  fg_ = std::make_unique<FiniteGroup>(group_from_mats(G, elems_shared_));
  struct_ = abelian_structure(*fg_);
  chars_ = all_characters(*fg_, struct_);

  for (size_t i = 0; i < elems_.size(); ++i)
    if (G.stratum_index(elems_[i]) >= r - 1)
      ct_idx_.push_back(static_cast<int>(i));
  if (r == 2 && ct_idx_.size() != static_cast<size_t>(q))
    throw std::logic_error("Torus: |ct^F| != q at r = 2");

  // F stabilizes ct: F(ct_elt(s)) is again a ct element.  Verified
  // exhaustively on the F^2-fixed parameter set; hence n_reg = 1.
  n_reg_ = 1;
  if (r >= 2) {
    Mat ginv = G.inv(gamma_);
    for (const Fe& s : ct_fixed_params(2)) {
      Mat f = G.frobenius(ct_elt(s));
      Mat d = G.conj(f, ginv);
      if (!R.is_zero(d.at(0, 1)) || !R.is_zero(d.at(1, 0)))
        throw std::logic_error("Torus: F does not stabilize ct");
      if (R.valuation(R.sub(d.at(0, 0), R.one())) < r - 1)
        throw std::logic_error("Torus: F breaks the ct level");
    }
  }
}

int Torus::index_of(const Mat& t) const {
  auto it = index_.find(amb_->group.key(t));
  if (it == index_.end())
    throw std::invalid_argument("Torus: matrix is not an element of T_r^F");
  return it->second;
}

Mat Torus::ct_elt(const Fe& s) const {
  if (amb_->r < 2) throw std::invalid_argument("ct_elt: requires r >= 2");
  const TruncRing& R = amb_->ring;
  Re u = R.add(R.one(), R.monomial(s, amb_->r - 1));
  return amb_->group.conj(amb_->group.torus_elt(kRoot01, u), gamma_);
}

std::vector<Fe> Torus::ct_fixed_params(int n) const {
  if (n < 1 || n > 4)
    throw std::invalid_argument("ct_fixed_params: extension budget is n <= 4");
  const FieldTower& F = amb_->tower;
  // F(ct_elt(s)) = ct_elt(s^q) (split) or ct_elt(-s^q) (non-split, via the
  // nu-twist), so F^n fixes ct_elt(s) iff s^{q^n} = (+-1)^n s.
  bool minus = (kind_ == TorusKind::kNonsplit) && (n % 2 == 1);
  return F.solve_linear(
      [&F, n, minus](const Fe& x) {
        Fe y = F.frob(x, n);
        return minus ? F.add(y, x) : F.sub(y, x);
      },
      F.zero());
}

Mat Torus::norm(const Mat& t, int n) const {
  if (n < 1) throw std::invalid_argument("norm: n >= 1");
  const MatGroup& G = amb_->group;
  if (!(G.frobenius(t, n) == t))
    throw std::invalid_argument("norm: element is not F^n-fixed");
  Mat acc = t, f = t;
  for (int i = 1; i < n; ++i) {
    f = G.frobenius(f);
    acc = G.mul(acc, f);
  }
  if (!(G.frobenius(acc) == acc))
    throw std::logic_error("norm: result not F-fixed");
  return acc;
}

bool Torus::is_regular(const AbelianChar& theta) const {
  if (amb_->r < 2) throw std::invalid_argument("is_regular: requires r >= 2");
  if (theta.values.size() != elems_.size())
    throw std::invalid_argument("is_regular: character/torus mismatch");
  for (const Fe& s : ct_fixed_params(n_reg_)) {
    Mat nt = norm(ct_elt(s), n_reg_);
    if (!(theta.value(index_of(nt)) == Cyclo(1L))) return true;
  }
  return false;
}

Torus::WeylData Torus::weyl_orbit_data(const Torus& T, const Torus& Tp) {
  if (T.amb_.get() != Tp.amb_.get())
    throw std::invalid_argument("weyl_orbit_data: tori must share an ambient");
  const MatGroup& G = T.amb_->group;
  const TruncRing& R = T.amb_->ring;
  Mat binv = G.inv(Tp.gamma_);

  WeylData out;
  out.reps = {G.mul(T.gamma_, binv), G.mul(G.mul(T.gamma_, T.amb_->nu), binv)};

  Mat ainv = G.inv(T.gamma_);
  auto in_T = [&](const Mat& z) {
    Mat d = G.conj(z, ainv);
    return R.is_zero(d.at(0, 1)) && R.is_zero(d.at(1, 0));
  };
  for (const Mat& rep : out.reps) {
    Mat fr = G.frobenius(rep);
    out.f_fixed.push_back(in_T(G.mul(fr, G.inv(rep))));
    int img = -1;
    for (size_t j = 0; j < out.reps.size(); ++j)
      if (in_T(G.mul(fr, G.inv(out.reps[j])))) { img = static_cast<int>(j); break; }
    if (img < 0) throw std::logic_error("weyl_orbit_data: F-image not found");
    out.f_image.push_back(img);
  }
  // For F-stable classes the Ad computation below uses the representative
  // directly, so it must itself be F-fixed (true for these tori).
  for (size_t k = 0; k < out.reps.size(); ++k)
    if (out.f_fixed[k] && !(G.frobenius(out.reps[k]) == out.reps[k]))
      throw std::logic_error("weyl_orbit_data: F-stable class has no F-fixed representative");
  return out;
}

int Torus::predicted_gram(const Torus& T, const AbelianChar& theta,
                          const Torus& Tp, const AbelianChar& thetap) {
  WeylData wd = weyl_orbit_data(T, Tp);
  const MatGroup& G = T.amb_->group;
  int count = 0;
  for (size_t k = 0; k < wd.reps.size(); ++k) {
    if (!wd.f_fixed[k]) continue;
    bool match = true;
    for (int i = 0; i < Tp.size() && match; ++i) {
      Mat img = G.conj(Tp.elems_[static_cast<size_t>(i)], wd.reps[k]);
      if (!(theta.value(T.index_of(img)) == thetap.value(i))) match = false;
    }
    if (match) ++count;
  }
  return count;
}

bool Torus::for_each_intertwiner(const Torus& Tp, const Torus& T, int n, int j,
                                 const std::function<bool(const Mat&)>& sink) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("norm intertwiners: extension budget is n <= 4");
  if (T.amb_.get() != Tp.amb_.get())
    throw std::invalid_argument("norm intertwiners: tori must share an ambient");
  const FieldTower& F = T.amb_->tower;
  const TruncRing& R = T.amb_->ring;
  const MatGroup& G = T.amb_->group;
  int r = T.amb_->r;
  std::uint64_t qn = ipow_u64(T.amb_->q, n);

  // Parity obstruction: with F(gamma) = gamma nu^e (e = 1 for the twisted
  // torus, 0 for the split one), F^n maps the coset family
  // T' m(.) nu^j T-part to the one with j shifted by n(e_A - e_B); an odd
  // shift lands in the disjoint opposite coset, so no candidate can be
  // F^n-fixed and the scan is skipped.  (Candidates are verified directly,
  // so this is purely a shortcut.)
  int eA = Tp.kind_ == TorusKind::kNonsplit ? 1 : 0;
  int eB = T.kind_ == TorusKind::kNonsplit ? 1 : 0;
  if ((n * (eA - eB)) % 2 != 0) return false;

  Mat binv = G.inv(T.gamma_);
  Mat tail = (j == 0) ? binv : G.mul(T.amb_->nu, binv);

  auto emit = [&](const Re& a) {
    if (!R.is_unit(a)) return false;
    Mat g = G.mul(G.mul(Tp.gamma_, G.torus_elt(kRoot01, a)), tail);
    if (!(G.frobenius(g, n) == g)) return false;
    return sink(g);
  };

  // Elements of the coset T'(alg) m-part nu^j T-part are g = A m(a) nu^j
  // B^{-1}; commuting nu-powers past m(.) shows F^n(g) = g forces one of
  // three parameter shapes.  Each candidate is still verified directly, so
  // the shapes only need to cover all solutions:
  //   (A) F^n(a) = a            - coefficients in the degree-n subfield;
  //   (B) a F^n(a) = 1          - a_0^{q^n+1} = 1, a_1 + a_1^{q^n} = 0;
  //   (C) F^n(a) = -a           - a_0^{q^n} = -a_0, a_1 in degree-n subfield.
  if (divides(n, kTowerDeg)) {
    for (const Re& a : R.units(n))
      if (emit(a)) return true;
  }
  auto level1 = [&](bool minus_kernel) {
    std::vector<Fe> out;
    if (r == 1) {
      out.push_back(F.zero());
    } else if (minus_kernel) {
      out = F.solve_linear(
          [&F, n](const Fe& x) { return F.add(F.frob(x, n), x); }, F.zero());
    } else {
      out = F.subfield(n);
    }
    return out;
  };
  if (divides(2 * n, kTowerDeg)) {
    std::vector<Fe> a1s = level1(true);
    for (const Fe& a0 : F.subfield(2 * n)) {
      if (F.is_zero(a0) || !(F.pow(a0, qn + 1) == F.one())) continue;
      for (const Fe& a1 : a1s) {
        Re a = R.mul(R.constant(a0), R.add(R.one(), R.monomial(a1, 1)));
        if (emit(a)) return true;
      }
    }
  }
  if (divides(n, kTowerDeg)) {
    std::vector<Fe> a0s = F.solve_linear(
        [&F, n](const Fe& x) { return F.add(F.frob(x, n), x); }, F.zero());
    std::vector<Fe> a1s = level1(false);
    for (const Fe& a0 : a0s) {
      if (F.is_zero(a0)) continue;
      for (const Fe& a1 : a1s) {
        Re a = R.mul(R.constant(a0), R.add(R.one(), R.monomial(a1, 1)));
        if (emit(a)) return true;
      }
    }
  }
  return false;
}

std::optional<Mat> Torus::first_intertwiner(const Torus& Tp, const Torus& T,
                                            int n, int j) {
  std::optional<Mat> found;
  for_each_intertwiner(Tp, T, n, j, [&found](const Mat& g) {
    found = g;
    return true;
  });
  return found;
}

std::vector<Mat> Torus::norm_intertwiners(const Torus& Tp, const Torus& T,
                                          int n) {
  const MatGroup& G = T.amb_->group;
  std::vector<Mat> out;
  std::unordered_map<MatGroup::Key, int, MatKeyHash> seen;
  for (int j = 0; j < 2; ++j)
    for_each_intertwiner(Tp, T, n, j, [&](const Mat& g) {
      if (seen.emplace(G.key(g), 1).second) out.push_back(g);
      return false;
    });
  std::sort(out.begin(), out.end(),
            [&G](const Mat& x, const Mat& y) { return G.key(x) < G.key(y); });
  return out;
}

bool Torus::norm_orbit_equivalent(const Torus& T, const AbelianChar& theta,
                                  const Torus& Tp, const AbelianChar& thetap,
                                  int n_max) {
  if (n_max < 1 || n_max > 4)
    throw std::invalid_argument(
        "norm_orbit_equivalent: extension budget is n_max <= 4");
  if (T.amb_->r < 2 || Tp.amb_->r < 2)
    throw std::invalid_argument("norm_orbit_equivalent: requires r >= 2");
  const MatGroup& G = T.amb_->group;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<Fe> params = Tp.ct_fixed_params(n);
    for (int j = 0; j < 2; ++j) {
      // The transported function is constant along each coset family (the
      // diagonal part of g commutes with ct), so one witness per family
      // decides it; the witness is still evaluated explicitly pointwise.
      std::optional<Mat> g = first_intertwiner(Tp, T, n, j);
      if (!g) continue;
      Mat ginv = G.inv(*g);
      bool ok = true;
      for (const Fe& s : params) {
        Mat y = Tp.ct_elt(s);
        Mat x = G.conj(y, ginv);  // g^{-1} y g, an element of T
        Cyclo lhs = theta.value(T.index_of(T.norm(x, n)));
        Cyclo rhs = thetap.value(Tp.index_of(Tp.norm(y, n)));
        if (!(lhs == rhs)) { ok = false; break; }
      }
      if (ok) return true;
    }
  }
  return false;
}

}  // namespace ringrep
