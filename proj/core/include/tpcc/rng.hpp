#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tpcc {

// Deterministic PRNG (splitmix64). The standard <random> distributions are
// implementation-defined, so all draws are derived here by hand to keep runs
// reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Inclusive range [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

  // Uniform in (0, 1]; never returns 0 so it is safe under log().
  double uniform01();

  // True with probability pct/100.
  bool chance_percent(int pct) { return uniform(1, 100) <= pct; }

  // Alphanumeric string of random length in [lo, hi].
  std::string astring(int lo, int hi);

  // Digit string of random length in [lo, hi].
  std::string nstring(int lo, int hi);

  // Derives an independent stream; mixing is order-sensitive by design.
  Rng derive(std::uint64_t stream) const;

 private:
  std::uint64_t state_;
};

// TPC-C non-uniform random selection:
//   (((rand(0,A) | rand(x,y)) + C) % (y - x + 1)) + x
// Throws std::invalid_argument on an invalid range.
std::int64_t nurand(std::int64_t a, std::int64_t x, std::int64_t y,
                    std::int64_t c, Rng& rng);

// Syllable-concatenation customer last name for n in [0, 999].
std::string syllable_last_name(int n);

}  // namespace tpcc
