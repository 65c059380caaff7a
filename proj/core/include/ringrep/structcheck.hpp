#pragma once
// Randomized and exhaustive checks of the structural identities behind the
// matrix-group machinery: root-subgroup commutation with its correction
// factors, the shift-past identity with torus-part additivity, the
// unitriangular factorization round trip, exhaustive uniqueness of the
// correction terms at the smallest depth-2 case, and the leading-support
// partition of the positive-level unitriangular stratum.
//
// Each block returns a TrialBlock with the number of checks run, the number
// of failed checks, optional named counters (case distribution, skipped
// draws), and a note when the block does not apply to the given parameters.
// Randomized blocks draw from DetRng, so a (parameters, seed) pair fully
// determines the outcome on every platform.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ringrep/gfield.hpp"
#include "ringrep/matgrp.hpp"
#include "ringrep/trunc.hpp"

namespace ringrep {

struct TrialBlock {
  std::string name;
  long long trials = 0;
  long long failures = 0;
  std::vector<std::pair<std::string, long long>> counters;
  std::string note;
};

// x x' = x' x * (correction) for root elements x = x_a(u), x' = x_a'(v),
// across all three commutation cases; counters record the case split.
TrialBlock commutation_trials(const TruncRing& R, const MatGroup& G,
                              long long trials, std::uint64_t seed);

// xi z = z xi tau omega for a negative root element xi of level >= r-a-1
// and a positive-unitriangular z of level >= a, plus additivity of the
// torus parameter in z.  Requires depth >= 2 (noted otherwise).
TrialBlock shift_trials(const FieldTower& F, const TruncRing& R,
                        const MatGroup& G, long long trials,
                        std::uint64_t seed);

// factor_unitriangular round trip on random level-1 elements, and
// order-independence of the leading-support cell.  Depth >= 2.
TrialBlock factorization_trials(const TruncRing& R, const MatGroup& G,
                                long long trials, std::uint64_t seed);

// Exhaustive uniqueness of the opposite-root correction pair (tau, u) and
// the shift-past pair (tau, omega) over all parameters of the smallest
// depth-2 case (2x2 matrices over F_2[eps]/(eps^2)).  Self-contained.
TrialBlock exhaustive_uniqueness_block();

// Exhaustive check that the (level, leading-support) cells partition the
// nontrivial positive-level unitriangular elements; falls back to a note
// when the stratum exceeds 4096 elements.  Depth >= 2.
TrialBlock partition_block(const TruncRing& R, const MatGroup& G);

}  // namespace ringrep
