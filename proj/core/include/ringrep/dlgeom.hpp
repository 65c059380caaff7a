#pragma once
// Finite models of the depth-two flag coverings for SL2 over F_q[eps]/(eps^2)
// and the exact trace engine for their virtual characters.
//
// The base objects are "lines": free rank-1 direct summands of the rank-2
// module over the truncated ring.  The relative position of two lines is
// read off the determinant of a pair of generators — zero (equal lines),
// a nonzero zero-divisor (tangent: the intersection is eps times a line),
// or a unit (transverse).  Pairing every line with its Frobenius image
// partitions the line set into three strata, and each stratum carries a
// finite covering with a left action of G = SL2(F_q[eps]/(eps^2))^F
// commuting with a free right action of an abelian deck group:
//
//   * the F-equal stratum is covered by the coset space G/U of a
//     unipotent root subgroup, deck group the split-torus fixed group
//     (build_xtil);
//   * the F-tangent stratum's covering decomposes into (q^2-1)*q affine
//     components labelled (c0, d0, f) with (c0, d0) != (0, 0) over F_q and
//     f^q - f = 1, the deck group acting by signs on (c0, d0) and
//     translations on f (build_xtil_prime);
//   * the F-transverse stratum's covering is a smooth affine surface whose
//     compactly supported cohomology traces are computed stratum by
//     stratum over the distinguished rational point locus S00
//     (enumerate_s00, lefschetz_xtilpp, lefschetz_value).
//
// assemble_R projects a pair-trace table onto a deck-character isotypic
// piece, producing a virtual character of G whose multiplicities in the
// irreducible rows are verified to be integers.  span_check reports the
// exact rational span of all these virtual characters inside the character
// lattice of G.

#include <array>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "ringrep/abelian.hpp"
#include "ringrep/charkit.hpp"
#include "ringrep/gfield.hpp"
#include "ringrep/matgrp.hpp"
#include "ringrep/torus.hpp"
#include "ringrep/trunc.hpp"

namespace ringrep {

// Shared computational context at one q.  Group-theoretic data (element
// list, conjugacy classes, full character table) live over a prime-field
// coefficient tower where arithmetic is cheap; the geometry (tori, line
// strata, surface points) lives over the degree-12 tower shared with the
// torus module.  Matrices with prime-field entries bridge the two contexts
// entrywise through their integer codes.
class DlContext {
 public:
  explicit DlContext(int q);  // q in {2, 3}
  DlContext(const DlContext&) = delete;
  DlContext& operator=(const DlContext&) = delete;

  int q() const { return q_; }

  // Table side: coefficients in F_q itself.
  const FieldTower& ttower() const { return tw_; }
  const TruncRing& tring() const { return ring_; }
  const MatGroup& tgroup() const { return grp_; }
  const std::vector<Mat>& elems() const { return *elems_; }
  int index_of(const Mat& g) const;  // throws if not in the element list
  const FiniteGroup& fgroup() const { return *fg_; }
  const ConjClasses& classes() const { return *cls_; }
  const CharacterTable& table() const { return *tab_; }

  // Geometry side: coefficients in F_{q^12}.
  const TorusAmbient& ambient() const { return *amb_; }
  const std::shared_ptr<TorusAmbient>& ambient_ptr() const { return amb_; }
  const Torus& split() const { return *split_; }
  const Torus& nonsplit() const { return *nonsplit_; }

  // Entrywise bridge between the two coefficient contexts.  Defined exactly
  // for matrices all of whose entry coefficients lie in the prime field;
  // both directions verify that and throw std::logic_error otherwise.
  Mat lift(const Mat& table_side) const;  // table -> geometry
  Mat drop(const Mat& geom_side) const;   // geometry -> table

 private:
  int q_;
  FieldTower tw_;
  TruncRing ring_;
  MatGroup grp_;
  std::shared_ptr<const std::vector<Mat>> elems_;
  std::unordered_map<MatGroup::Key, int, MatKeyHash> index_;
  std::unique_ptr<FiniteGroup> fg_;
  std::unique_ptr<ConjClasses> cls_;
  std::unique_ptr<CharacterTable> tab_;
  std::shared_ptr<TorusAmbient> amb_;
  std::unique_ptr<Torus> split_;
  std::unique_ptr<Torus> nonsplit_;
};

// ---------------------------------------------------------------------------
// Lines and relative position.

// A line over F_{q^m}[eps]/(eps^2) by its canonical generator (a, b):
// either a = 1 (b arbitrary), or a in eps*F_{q^m} and b = 1.
struct FlagLine {
  Re a, b;
};

enum class RelPos { kEqual, kTangent, kTransverse };

// Position of the pair (L1, L2) from the determinant a1*b2 - a2*b1 of the
// canonical generators: zero / nonunit zero-divisor / unit.
RelPos relative_position(const TruncRing& R, const FlagLine& L1,
                         const FlagLine& L2);

struct FlagTable {
  int m = 1;                     // coefficient subfield degree
  std::vector<FlagLine> lines;   // all q^(2m) + q^m lines over F_{q^m}
  std::vector<RelPos> frob_pos;  // position of (L, F(L)), per line
  long long count_equal = 0;
  long long count_tangent = 0;
  long long count_transverse = 0;
};

// Enumerate all lines rational over F_{q^m} (1 <= m <= 4) inside the
// geometry ambient and classify each against its Frobenius image.
FlagTable flag_positions(const TorusAmbient& amb, int m);

// ---------------------------------------------------------------------------
// Coset covering of the F-equal stratum.

// Points are left cosets gU of the lower-unitriangular subgroup
// U = { e1 -> e1 + b*e2 } (q^2 elements) in G, with left G-action and
// free right action of the split-torus fixed group Gamma; the orbit space
// is the F-equal line stratum.  pair_traces[c][t] is the number of cosets
// fixed by x -> g_c * x * t^{-1} (g_c the class-c representative, t the
// Gamma element of that index).
struct CosetCovering {
  const DlContext* ctx = nullptr;
  std::vector<int> reps;      // least element index in each coset, increasing
  std::vector<int> coset_of;  // element index -> coset index
  std::vector<int> gamma_elem;  // Gamma element index -> table element index
  std::vector<std::vector<long long>> pair_traces;  // [class][Gamma elt]
  int points() const { return static_cast<int>(reps.size()); }
};

CosetCovering build_xtil(const DlContext& ctx);

// Isotypic piece of the permutation character under deck character
// omega_idx (index into ctx.split().characters()); a genuine character.
ClassFunction xtil_isotypic(const CosetCovering& xt, int omega_idx);

// ---------------------------------------------------------------------------
// Component covering of the F-tangent stratum.

// Components are labelled (c0, d0, f): (c0, d0) != (0, 0) over F_q up to
// nothing (all (q^2-1) pairs occur), f a root of f^q - f = 1 in F_{q^q}.
// G acts through the depth-two column action on an explicit point of each
// component; the deck group acts by (s, mu): (c0, d0, f) ->
// (s*(c0, d0), f + mu) with s = +-1 (sign trivial when q = 2) and mu in
// F_q.  Both actions are verified to permute the component list, to
// commute, and (for G) to be a homomorphism on all of G x G.
struct ComponentCovering {
  const DlContext* ctx = nullptr;
  struct Comp {
    Fe c0, d0, f;
  };
  std::vector<Comp> comps;             // sorted by encoded labels
  int deck_order = 0;                  // 2q for odd q, q for q = 2
  std::unique_ptr<FiniteGroup> deck;   // abelian deck group
  AbelianStructure deck_struct;
  std::vector<AbelianChar> deck_chars;
  std::vector<std::vector<int>> g_perm;     // [element index][comp] -> comp
  std::vector<std::vector<int>> deck_perm;  // [deck elt][comp] -> comp
  std::vector<std::vector<long long>> pair_traces;  // [class][deck elt]
  int components() const { return static_cast<int>(comps.size()); }
};

ComponentCovering build_xtil_prime(const DlContext& ctx);

// Deck-isotypic piece of the top cohomology of the component covering
// (the permutation module on components); a genuine character.
ClassFunction xtilp_isotypic(const ComponentCovering& xp, int chi_idx);

// ---------------------------------------------------------------------------
// Surface covering of the F-transverse stratum.

// Distinguished rational point locus: pairs (a, b) with F^2(a) = -a,
// F^2(b) = -b, and a*b^q - a^q*b = 1; exactly q^3 - q points, carrying a
// simply transitive action of the level-zero subgroup SL2(F_q) < G
// (verified at construction).
struct S00Set {
  std::vector<std::array<Fe, 2>> pts;
  std::vector<Mat> level0;  // the q^3 - q level-zero elements, geometry side
};

S00Set enumerate_s00(const DlContext& ctx);

// Scaling parameter of a nonsplit-torus fixed element t on the surface
// model: gamma^{-1} t gamma is diagonal (verified); returns its first
// diagonal entry, a unit with lambda0^(q+1) = 1 and
// lambda0*lambda1^q + lambda0^q*lambda1 = 0.
Re surface_scaling(const DlContext& ctx, const Mat& t_geom);

// Alternating trace of the commuting pair (g, scaling by lambda) on the
// compactly supported cohomology of the surface covering, computed from
// the stratified case table; throws std::logic_error if the acting pair
// falls outside the verified case shapes.
long long lefschetz_value(const DlContext& ctx, const S00Set& s00,
                          const Mat& g_geom, const Re& lambda);

// Full pair-trace table [conjugacy class][nonsplit-torus fixed element].
std::vector<std::vector<long long>> lefschetz_xtilpp(const DlContext& ctx,
                                                     const S00Set& s00);

// ---------------------------------------------------------------------------
// Virtual characters and the span report.

// Exact multiplicities of f in the irreducible rows; throws
// std::logic_error if any multiplicity is not an integer.
std::vector<long long> integral_multiplicities(const CharacterTable& tab,
                                               const ClassFunction& f);

// Deck-isotypic virtual character of each covering.  The surface overload
// projects the trace table onto theta_idx (index into
// ctx.nonsplit().characters()).
ClassFunction assemble_R(const CosetCovering& xt, int omega_idx);
ClassFunction assemble_R(const ComponentCovering& xp, int chi_idx);
ClassFunction assemble_R(const DlContext& ctx,
                         const std::vector<std::vector<long long>>& lef,
                         int theta_idx);

// One virtual character entering the span report.
struct SpanMember {
  char family;    // 'C' coset covering, 'T' tangent components, 'S' surface
  int char_idx;   // deck character index within its family
  std::vector<long long> mult;  // multiplicities in the irreducible rows
};

struct SpanReport {
  int q = 0;
  int num_irreducibles = 0;
  std::vector<SpanMember> members;
  int rank = 0;
  std::vector<int> outside_span;  // irreducible rows not in the rational span
  bool regular_expressible = false;      // regular character in the span?
  std::vector<mpq_class> regular_coeffs;  // one witness when expressible
};

// Exact rational span of all deck-isotypic virtual characters of the three
// coverings inside the character lattice, plus an exact attempt to express
// the regular character of G in that span.
SpanReport span_check(const DlContext& ctx, const CosetCovering& xt,
                      const ComponentCovering& xp,
                      const std::vector<std::vector<long long>>& lef);

}  // namespace ringrep
