#pragma once
// F-stable maximal tori of 2x2 determinant-1 groups over truncated rings:
// the split (diagonal) torus and its twist by a conjugator gamma with
// gamma^{-1} F(gamma) = nu, nu = [[0,-1],[1,0]].  Provides the fixed-point
// groups T_r^F with their abelian structure and character groups, the norm
// map t -> t F(t) ... F^{n-1}(t), the regularity predicate for characters,
// Weyl-set data, and the norm-orbit equivalence test with explicit
// intertwiner witnesses.
//
// All constructions live inside one shared ambient: 2x2 matrices over
// F_q[eps]/(eps^r) with coefficients in the degree-12 extension of F_q,
// which contains every subfield (degrees 1,2,3,4,6) needed for twisted
// fixed points up to F^4.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ringrep/abelian.hpp"
#include "ringrep/charkit.hpp"
#include "ringrep/gfield.hpp"
#include "ringrep/matgrp.hpp"
#include "ringrep/trunc.hpp"

namespace ringrep {

enum class TorusKind { kSplit, kNonsplit };

// Shared arithmetic context for tori at one (q, r).  Non-movable: the ring
// and group hold pointers into the bundle.
struct TorusAmbient {
  FieldTower tower;  // F_{q^12}
  TruncRing ring;    // F_{q^12}[eps]/(eps^r)
  MatGroup group;    // 2x2
  int q;
  int r;
  Mat nu;

  TorusAmbient(const TorusAmbient&) = delete;
  TorusAmbient& operator=(const TorusAmbient&) = delete;

  explicit TorusAmbient(int q_, int r_);
};

std::shared_ptr<TorusAmbient> make_torus_ambient(int q, int r);

class Torus {
 public:
  // q in {2,3,5}, r in {1,2} (enforced by TorusAmbient).
  Torus(std::shared_ptr<TorusAmbient> amb, TorusKind kind);

  TorusKind kind() const { return kind_; }
  int q() const { return amb_->q; }
  int r() const { return amb_->r; }
  const TorusAmbient& ambient() const { return *amb_; }

  // Conjugator: identity for the split torus; for the non-split torus a
  // matrix over F_{q^m} with gamma^{-1} F(gamma) = nu (verified at build).
  const Mat& gamma() const { return gamma_; }
  int gamma_degree() const { return gamma_deg_; }  // least such m

  // T_r^F, sorted by matrix key; complete by construction.
  const std::vector<Mat>& elements() const { return elems_; }
  int size() const { return static_cast<int>(elems_.size()); }
  int index_of(const Mat& t) const;  // throws if not in T_r^F

  const FiniteGroup& fgroup() const { return *fg_; }
  const AbelianStructure& structure() const { return struct_; }
  // All |T_r^F| characters, lexicographic in exponent vectors (trivial
  // character first).
  const std::vector<AbelianChar>& characters() const { return chars_; }

  // ct^F: the F-fixed part of the level-(r-1) one-parameter subgroup
  // ct = T_r^{r-1}, as indices into elements().  At r = 1 this is all of
  // T^F.
  const std::vector<int>& ct_indices() const { return ct_idx_; }

  // ct element with parameter s (gamma-conjugated 1 + eps^{r-1} s on the
  // diagonal); r >= 2.
  Mat ct_elt(const Fe& s) const;
  // Parameters s with F^n(ct_elt(s)) = ct_elt(s); n in {1,2,3,4}.
  std::vector<Fe> ct_fixed_params(int n) const;

  // The n used by the regularity test: least n with F^n stabilizing every
  // root one-parameter group of T.  For these tori the single ct is
  // F-stable, so n = 1 (verified on ct^{F^2} at build when r >= 2).
  int n_reg() const { return n_reg_; }

  // Norm N^{F^n}_F(t) = t F(t) ... F^{n-1}(t); requires F^n(t) = t; the
  // F-fixed result is verified.
  Mat norm(const Mat& t, int n) const;

  // theta regular iff theta . N^{F^n}_F is non-trivial on ct^{F^n} with
  // n = n_reg(); for these tori that is non-triviality on ct^F.  r >= 2.
  bool is_regular(const AbelianChar& theta) const;

  // Weyl set W(T,T') = T \ N(T,T'), N(T,T') = {g : g^{-1} T g = T'}: coset
  // representatives, F-stability of each class, and the F-action on
  // classes.  For F-stable classes the representative itself is F-fixed.
  struct WeylData {
    std::vector<Mat> reps;
    std::vector<bool> f_fixed;
    std::vector<int> f_image;
  };
  static WeylData weyl_orbit_data(const Torus& T, const Torus& Tp);

  // #{w in W(T,T')^F : theta . Ad(w-rep) = theta' on T'^F}, where
  // Ad(g)(t') = g t' g^{-1} maps T' to T.
  static int predicted_gram(const Torus& T, const AbelianChar& theta,
                            const Torus& Tp, const AbelianChar& thetap);

  // True iff for some n <= n_max and some F^n-fixed g with g^{-1} T' g = T,
  // theta(N^{F^n}(g^{-1} y g)) = theta'(N^{F^n}(y)) for every y in
  // ct'^{F^n}.  n_max <= 4 (extension budget).  When a witness is found the
  // transported equality is re-verified pointwise with the explicit g.
  static bool norm_orbit_equivalent(const Torus& T, const AbelianChar& theta,
                                    const Torus& Tp, const AbelianChar& thetap,
                                    int n_max);

  // All of N(T',T)^{F^n} = {g : g^{-1} T' g = T, F^n(g) = g} inside the
  // ambient, sorted by key; n in {1,2,3,4}.
  static std::vector<Mat> norm_intertwiners(const Torus& Tp, const Torus& T,
                                            int n);

 private:
  // Enumerate verified F^n-fixed elements of the coset family
  // T'-gamma m(a) nu^j T-gamma^{-1}; sink returns true to stop early.
  // Returns true if stopped.
  static bool for_each_intertwiner(const Torus& Tp, const Torus& T, int n,
                                   int j,
                                   const std::function<bool(const Mat&)>& sink);
  static std::optional<Mat> first_intertwiner(const Torus& Tp, const Torus& T,
                                              int n, int j);

  std::shared_ptr<TorusAmbient> amb_;
  TorusKind kind_;
  Mat gamma_;
  int gamma_deg_ = 1;
  int n_reg_ = 1;
  std::vector<Mat> elems_;
  std::unordered_map<MatGroup::Key, int, MatKeyHash> index_;
  std::shared_ptr<const std::vector<Mat>> elems_shared_;
  std::unique_ptr<FiniteGroup> fg_;
  AbelianStructure struct_;
  std::vector<AbelianChar> chars_;
  std::vector<int> ct_idx_;
};

}  // namespace ringrep
