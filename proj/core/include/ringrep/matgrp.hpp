#pragma once
// SL_n (n = 2 or 3) over a truncated ring k[eps]/(eps^r): exact group
// arithmetic, the congruence filtration ker(reduce to length i) and its
// strata, type A_{n-1} root subgroups with heights, and three structural
// decompositions in the congruence filtration:
//
//  * commutation(): product of two root-subgroup elements whose levels sum
//    past the truncation length commute; below that, the commutator is a
//    single root factor (distinct non-opposite roots) or a torus-times-root
//    correction at the top level (opposite roots).
//  * shift_past(): moving a low root element past a unitriangular element
//    of the opposite sign costs a top-level one-parameter torus factor and
//    a top-level unipotent factor, both computed and verified exactly.
//  * leading_support(): the canonical (level, root subset) invariant of a
//    nontrivial element of the level-1 unitriangular group, independent of
//    the factorization order.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "ringrep/trunc.hpp"

namespace ringrep {

// Root (i,j) of type A_{n-1} (0-based indices, i != j): the root subgroup
// is {I + u E_{ij}}, positive iff i < j, height |j - i|.
struct Root {
  int i = 0, j = 0;
  friend bool operator==(const Root&, const Root&) = default;
};
inline bool root_positive(const Root& a) { return a.i < a.j; }
inline int root_height(const Root& a) { return a.i < a.j ? a.j - a.i : a.i - a.j; }
inline Root root_negate(const Root& a) { return Root{a.j, a.i}; }

// n x n matrix over the ring; entries beyond n x n stay zero so that
// operator== is structural.
struct Mat {
  int n = 0;
  std::array<Re, 9> e{};
  Re& at(int i, int j) { return e[static_cast<size_t>(3 * i + j)]; }
  const Re& at(int i, int j) const { return e[static_cast<size_t>(3 * i + j)]; }
  friend bool operator==(const Mat&, const Mat&) = default;
};

class MatGroup {
 public:
  using Key = std::array<std::uint64_t, 9>;

  MatGroup(const TruncRing& ring, int n);

  const TruncRing& ring() const { return *R_; }
  int n() const { return n_; }

  Mat identity() const;
  Mat mul(const Mat& a, const Mat& b) const;
  Mat inv(const Mat& a) const;  // via the adjugate; requires det a unit
  Re det(const Mat& a) const;
  Mat conj(const Mat& g, const Mat& h) const;  // h g h^{-1}
  Mat frobenius(const Mat& a, int e = 1) const;
  Key key(const Mat& a) const;
  Mat from_key(const Key& k) const;

  // All determinant-1 matrices with entries drawn from ring coefficients in
  // the tower subfield of degree d, in increasing key order.  Budget: the
  // scan space |ring restricted to d|^(n^2) must be <= 10^9.
  std::vector<Mat> enumerate_sl(int d) const;

  // The unique i in [0, r] with g = 1 mod eps^i but not mod eps^{i+1}
  // (r for the identity): position of g in the congruence strata.
  int stratum_index(const Mat& g) const;

  // --- roots ---
  std::vector<Root> positive_roots() const;
  std::vector<Root> all_roots() const;
  Mat root_elt(const Root& a, const Re& u) const;      // I + u E_{ij}
  Mat torus_elt(const Root& a, const Re& t) const;     // t at i, t^{-1} at j
  // The level-(r-1) part of the one-parameter torus of a: elements
  // torus_elt(a, 1 + eps^{r-1} s), s over the subfield of degree d.
  std::vector<Mat> ct_alpha(const Root& a, int d) const;
  // Read the root-subgroup parameter back off (throws if g is not of the
  // form root_elt(a, u)).
  Re root_param(const Root& a, const Mat& g) const;

  // --- commutation of root-subgroup elements x = I + u E_a (level b),
  //     x' = I + u' E_{a'} (level c) ---
  enum class CommCase { kCommute, kSingleRootFactor, kOppositeRoots };
  struct Commutation {
    CommCase kind;
    // kSingleRootFactor: x x' = x' x * prod(factors); here at most one
    // factor (type A_2), at level >= b + c.
    std::vector<std::pair<Root, Re>> factors;
    // kOppositeRoots: x x' = x' x * tau * u with tau in the level-(r-1)
    // one-parameter torus of a and u in the level-(r-1) root subgroup of a.
    Fe tau_param;  // s with tau = torus_elt(a, 1 + eps^{r-1} s)
    Mat tau;
    Mat u;
  };
  // Preconditions: v(u) >= b, v(u') >= c; for opposite roots with b+c < r,
  // requires b + c >= r - 1 and b + 2c >= r.  The returned decomposition is
  // verified exactly by re-multiplication before being returned.
  Commutation commutation(const Root& a, const Re& u, int b,
                          const Root& ap, const Re& up, int c) const;

  // --- shifting a negative-root element past an upper unitriangular one ---
  // xi = I + u E_alpha with alpha negative and v(u) >= r - a - 1;
  // z upper unitriangular with all root parameters at valuation >= a and
  // those of height > height(alpha) at valuation >= a + 1.
  // Returns (tau, omega) with xi z = z xi tau omega, tau in the
  // level-(r-1) one-parameter torus of alpha, omega lower unitriangular
  // congruent to 1 mod eps^{r-1}; verified exactly.
  struct Shift {
    Fe tau_param;
    Mat tau;
    Mat omega;
  };
  Shift shift_past(const Root& alpha, const Mat& xi, const Mat& z, int a) const;

  // --- unitriangular factorization and leading support ---
  // Factor an upper unitriangular z as the ordered product of root elements
  // x_beta(u_beta) over `order` (a permutation of the positive roots);
  // returns u_beta aligned with `order`.  The factorization is verified
  // exactly; throws if z is not upper unitriangular or the order cannot
  // factor it by left-peeling.
  std::vector<Re> factor_unitriangular(const Mat& z,
                                       const std::vector<Root>& order) const;

  // For z != 1 upper unitriangular with z = 1 mod eps: the least valuation
  // a among its root parameters, and the set I of positive roots whose
  // parameter has valuation exactly a while every strictly taller root's
  // parameter has valuation >= a + 1.  I is nonempty, of constant height,
  // and independent of the admissible factorization order.
  struct LeadingSupport {
    int level;
    std::vector<Root> roots;
  };
  LeadingSupport leading_support(const Mat& z) const;

 private:
  const TruncRing* R_;
  int n_;
};

struct MatKeyHash {
  size_t operator()(const MatGroup::Key& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t v : k) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace ringrep
