#include "doctest.h"
#include "ringrep/gfield.hpp"
#include "ringrep/numth.hpp"

#include <set>

using namespace ringrep;

TEST_CASE("canonical modulus is the least monic irreducible") {
  // Hand-checked: over F_3 the monic quadratics in increasing encoding are
  // x^2 (=x*x), x^2+1 (no roots in F_3 -> irreducible).  Over F_2 the monic
  // quartics start x^4, x^4+1=(x+1)^4, x^4+x=x(x+1)(x^2+x+1), x^4+x+1 (irr).
  auto f9 = FieldTower::make(3, 2);
  CHECK(f9.modulus() == std::vector<int>{1, 0});
  auto f16 = FieldTower::make(2, 4);
  CHECK(f16.modulus() == std::vector<int>{1, 1, 0, 0});
  // Degree 1: the least monic is x itself, so the generator class is 0.
  auto f3 = FieldTower::make(3, 1);
  CHECK(f3.modulus() == std::vector<int>{0});
  CHECK(f3.is_zero(f3.gen()));
  CHECK(f3.size() == 3);
}

TEST_CASE("field axioms hold exhaustively in F_9 and F_16") {
  for (auto [p, k] : {std::pair{3, 2}, std::pair{2, 4}}) {
    auto F = FieldTower::make(p, k);
    auto all = F.subfield(k);
    REQUIRE(all.size() == F.size());
    for (const Fe& a : all) {
      CHECK(F.encode(F.decode(F.encode(a))) == F.encode(a));
      // Fermat: x^(p^k) = x.
      CHECK(F.pow(a, F.size()) == a);
      if (!F.is_zero(a)) {
        CHECK(F.mul(a, F.inv(a)) == F.one());
        std::uint64_t o = F.mult_order(a);
        CHECK((F.size() - 1) % o == 0);
        CHECK(F.pow(a, o) == F.one());
      }
      for (const Fe& b : all) {
        CHECK(F.sub(F.add(a, b), b) == a);
        CHECK(F.mul(a, b) == F.mul(b, a));
        for (const Fe& c : all)
          CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      }
    }
    CHECK_THROWS_AS((void)F.inv(F.zero()), std::domain_error);
  }
}

TEST_CASE("F_9 structure: gen^2 = -1 and Frobenius fixes F_3") {
  auto F = FieldTower::make(3, 2);
  CHECK(F.mul(F.gen(), F.gen()) == F.from_int(-1));
  CHECK(F.from_int(-1) == F.neg(F.one()));
  int fixed = 0;
  for (const Fe& a : F.subfield(2))
    if (F.frob(a, 1) == a) ++fixed;
  CHECK(fixed == 3);
  // Frobenius is a ring endomorphism (exhaustive on pairs).
  auto all = F.subfield(2);
  for (const Fe& a : all)
    for (const Fe& b : all) {
      CHECK(F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b)));
      CHECK(F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b)));
    }
  // Exactly phi(8) = 4 multiplicative generators.
  int gens = 0;
  for (const Fe& a : all)
    if (!F.is_zero(a) && F.mult_order(a) == 8) ++gens;
  CHECK(gens == 4);
}

TEST_CASE("subfield lattice of F_16 and F_{3^12}") {
  auto F16 = FieldTower::make(2, 4);
  CHECK(F16.subfield(1).size() == 2);
  CHECK(F16.subfield(2).size() == 4);
  CHECK(F16.subfield(4).size() == 16);
  for (const Fe& a : F16.subfield(2)) CHECK(F16.pow(a, 4) == a);
  CHECK_THROWS(F16.subfield(3));

  auto F = FieldTower::make(3, 12);
  CHECK(F.size() == 531441);
  CHECK(F.subfield(1).size() == 3);
  CHECK(F.subfield(2).size() == 9);
  CHECK(F.subfield(3).size() == 27);
  CHECK(F.subfield(4).size() == 81);
  CHECK(F.subfield(6).size() == 729);
  for (const Fe& a : F.subfield(4)) {
    CHECK(F.frob(a, 4) == a);
    CHECK(F.pow(a, 81) == a);
  }
  // Subfields are fields: closed under product (spot-check on F_{3^4}).
  auto s4 = F.subfield(4);
  std::set<std::uint64_t> enc;
  for (const Fe& a : s4) enc.insert(F.encode(a));
  for (size_t i = 0; i < s4.size(); i += 7)
    for (size_t j = 0; j < s4.size(); j += 11)
      CHECK(enc.count(F.encode(F.mul(s4[i], s4[j]))) == 1);
  // Fermat sample in the big field.
  for (std::uint64_t v = 0; v < 200; ++v) {
    Fe a = F.decode(v * 2654u + 17u);
    CHECK(F.pow(a, F.size()) == a);
  }
}

TEST_CASE("solve_linear matches exhaustive scan") {
  auto F = FieldTower::make(3, 2);
  auto all = F.subfield(2);
  Fe g = F.gen();

  // L(x) = x^3 - x: kernel is F_3, image has index 3.
  auto AS = [&](const Fe& x) { return F.sub(F.frob(x, 1), x); };
  auto k0 = F.solve_linear(AS, F.zero());
  REQUIRE(k0.size() == 3);
  for (const Fe& x : k0) CHECK(F.frob(x, 1) == x);
  CHECK(F.solve_linear(AS, F.one()).empty());
  CHECK(F.solve_linear(AS, g).size() == 3);

  // Generic semilinear L(x) = g*x^3 + x, checked against brute force
  // for every right-hand side.
  auto L = [&](const Fe& x) { return F.add(F.mul(g, F.frob(x, 1)), x); };
  for (const Fe& c : all) {
    std::vector<std::uint64_t> brute;
    for (const Fe& x : all)
      if (L(x) == c) brute.push_back(F.encode(x));
    auto got = F.solve_linear(L, c);
    std::vector<std::uint64_t> gotenc;
    for (const Fe& x : got) gotenc.push_back(F.encode(x));
    CHECK(gotenc == brute);
  }
}

TEST_CASE("tower construction rejects bad parameters") {
  CHECK_THROWS(FieldTower::make(4, 2));
  CHECK_THROWS(FieldTower::make(2, 0));
  CHECK_THROWS(FieldTower::make(2, 17));
}
