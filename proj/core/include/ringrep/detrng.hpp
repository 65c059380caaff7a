#pragma once
// Deterministic RNG for randomized structural trials.  mt19937_64 has a
// standardized output sequence, so trials are reproducible across platforms
// for a fixed seed.  Modulo reduction is fine here: draws select among a
// handful of structural choices, where uniformity is irrelevant but
// determinism is required.

#include <cstdint>
#include <random>

namespace ringrep {

class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : eng_(seed) {}
  // A value in [0, bound); bound >= 1.
  std::uint64_t next(std::uint64_t bound) { return eng_() % bound; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ringrep
