#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spacespec {

// std::mt19937_64 with hand-written conversions: the engine's output is fixed
// by the standard, the <random> distributions are not, so seeded results stay
// reproducible across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi);  // inclusive

private:
  std::mt19937_64 engine_;
};

// Independent stream for (seed, purpose, index); sub-tasks never share a stream.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index);

}  // namespace spacespec
