// Micro-benchmarks for the hot paths: extension-field multiplication,
// determinant-1 group enumeration, conjugacy classes, and the exact
// character table of the depth-2 order-48 group.
#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "ringrep/charkit.hpp"
#include "ringrep/gfield.hpp"
#include "ringrep/matgrp.hpp"
#include "ringrep/trunc.hpp"

using namespace ringrep;

static void BM_FieldMul(benchmark::State& state) {
  FieldTower F = FieldTower::make(3, 12);
  Fe a = F.decode(123456 % F.size());
  Fe b = F.decode(424242 % F.size());
  for (auto _ : state) {
    a = F.mul(a, b);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_FieldMul);

static void BM_FieldInv(benchmark::State& state) {
  FieldTower F = FieldTower::make(3, 12);
  Fe a = F.decode(123457 % F.size());
  for (auto _ : state) {
    a = F.inv(a);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_FieldInv);

static void BM_EnumerateSL2(benchmark::State& state) {
  FieldTower F = FieldTower::make(3, 1);
  TruncRing R(F, 1, 2);
  MatGroup G(R, 2);
  for (auto _ : state) {
    auto elems = G.enumerate_sl(1);
    benchmark::DoNotOptimize(elems.data());
  }
}
BENCHMARK(BM_EnumerateSL2);

static void BM_ConjClasses48(benchmark::State& state) {
  FieldTower F = FieldTower::make(2, 1);
  TruncRing R(F, 1, 2);
  MatGroup G(R, 2);
  auto elems = std::make_shared<const std::vector<Mat>>(G.enumerate_sl(1));
  FiniteGroup fg = group_from_mats(G, elems);
  for (auto _ : state) {
    ConjClasses cls = ConjClasses::compute(fg);
    benchmark::DoNotOptimize(cls.num());
  }
}
BENCHMARK(BM_ConjClasses48);

static void BM_CharacterTable48(benchmark::State& state) {
  FieldTower F = FieldTower::make(2, 1);
  TruncRing R(F, 1, 2);
  MatGroup G(R, 2);
  auto elems = std::make_shared<const std::vector<Mat>>(G.enumerate_sl(1));
  FiniteGroup fg = group_from_mats(G, elems);
  ConjClasses cls = ConjClasses::compute(fg);
  for (auto _ : state) {
    CharacterTable tab = CharacterTable::compute(cls);
    benchmark::DoNotOptimize(tab.num());
  }
}
BENCHMARK(BM_CharacterTable48);

BENCHMARK_MAIN();
