#pragma once
// Generic finite-group machinery: oracle-backed groups on index sets,
// conjugacy classes with a deterministic ordering, exact character tables
// by the modular (class-matrix) method, class-function arithmetic, and
// isotypic projections for commuting product actions.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "ringrep/cyclo.hpp"
#include "ringrep/matgrp.hpp"

namespace ringrep {

// A finite group presented as indices 0..size-1 with multiplication and
// inverse oracles.  Element order is computed and cached eagerly.
class FiniteGroup {
 public:
  FiniteGroup(int size, int identity, std::function<int(int, int)> mul,
              std::function<int(int)> inv);

  int size() const { return n_; }
  int id() const { return id_; }
  int mul(int a, int b) const { return mul_(a, b); }
  int inv(int a) const { return inv_(a); }
  int pow(int a, std::uint64_t e) const;
  std::uint64_t order_of(int a) const { return ord_[static_cast<size_t>(a)]; }
  std::uint64_t exponent() const { return exponent_; }

 private:
  int n_, id_;
  std::function<int(int, int)> mul_;
  std::function<int(int)> inv_;
  std::vector<std::uint64_t> ord_;
  std::uint64_t exponent_;
};

// Wrap an explicit matrix list (as produced by MatGroup::enumerate_sl, or
// any product-closed list) as a FiniteGroup over its indices, in list order.
FiniteGroup group_from_mats(const MatGroup& G,
                            std::shared_ptr<const std::vector<Mat>> elems);

struct ConjClass {
  int rep;                   // least member index
  std::uint64_t elt_order;   // common order of the members
  int size;
};

class ConjClasses {
 public:
  // Orbit computation under conjugation; |G| <= 1e5.  Classes are ordered
  // by (element order, class size, least member index); member indices are
  // least-first, so with elements listed in encoding order the
  // representative has least encoding.
  static ConjClasses compute(const FiniteGroup& G);

  const FiniteGroup& group() const { return *G_; }
  int num() const { return static_cast<int>(classes_.size()); }
  const ConjClass& cls(int c) const { return classes_[static_cast<size_t>(c)]; }
  int class_of(int elt) const { return class_of_[static_cast<size_t>(elt)]; }
  int inverse_class(int c) const { return inv_class_[static_cast<size_t>(c)]; }

 private:
  const FiniteGroup* G_;
  std::vector<ConjClass> classes_;
  std::vector<int> class_of_;
  std::vector<int> inv_class_;
};

// A class function: one exact cyclotomic value per conjugacy class.
class ClassFunction {
 public:
  ClassFunction(const ConjClasses* cls, std::vector<Cyclo> vals);

  const ConjClasses& classes() const { return *cls_; }
  const Cyclo& value(int c) const { return vals_[static_cast<size_t>(c)]; }
  const std::vector<Cyclo>& values() const { return vals_; }

  ClassFunction operator+(const ClassFunction& o) const;
  ClassFunction operator-(const ClassFunction& o) const;
  ClassFunction scaled(const Cyclo& s) const;
  bool operator==(const ClassFunction& o) const;

 private:
  const ConjClasses* cls_;
  std::vector<Cyclo> vals_;
};

// (1/|G|) sum_c |C| f(c) conj(g(c)), exact.
Cyclo inner_product_cyclo(const ClassFunction& f, const ClassFunction& g);
// Same, asserting the result is rational (true for differences of genuine
// characters); throws std::domain_error otherwise.
mpq_class inner_product(const ClassFunction& f, const ClassFunction& g);

class CharacterTable {
 public:
  // Exact table by the modular method: diagonalize the class-multiplication
  // matrices over F_ell for a prime ell = 1 mod exponent(G), ell coprime to
  // |G| and > 2 sqrt(|G|), then lift eigenvalue multiplicities to
  // cyclotomic values.  Verifies sum(deg^2) = |G| and row orthonormality
  // before returning.  Requires exponent(G) <= 1e4.
  static CharacterTable compute(const ConjClasses& cls);

  const ConjClasses& classes() const { return *cls_; }
  int num() const { return static_cast<int>(rows_.size()); }
  const ClassFunction& row(int i) const { return rows_[static_cast<size_t>(i)]; }
  long degree(int i) const { return degrees_[static_cast<size_t>(i)]; }
  std::uint64_t modulus_used() const { return ell_; }

  // Multiplicities <f, chi_i> for all rows, exact rationals.
  std::vector<mpq_class> decompose(const ClassFunction& f) const;

 private:
  const ConjClasses* cls_;
  std::vector<ClassFunction> rows_;
  std::vector<long> degrees_;
  std::uint64_t ell_ = 0;
};

// Isotypic projection for a product action of G x Gamma (Gamma abelian):
// chi is given as a matrix of values chi[c][t] over (G-class c, Gamma
// element t); omega as a value vector over Gamma elements.  Returns
// g -> (1/|Gamma|) sum_t omega(t)^{-1} chi(g, t).
ClassFunction isotypic_component(const ConjClasses& cls,
                                 const std::vector<std::vector<Cyclo>>& chi,
                                 const FiniteGroup& Gamma,
                                 const std::vector<Cyclo>& omega);

}  // namespace ringrep
