#pragma once

#include <array>
#include <cstdint>

namespace lubchain {

/// xoshiro256** seeded through splitmix64. The algorithm is fixed so that
/// randomized suites reproduce bit-for-bit across platforms and ports.
class Xoshiro256
{
  public:
    static constexpr char const* name = "xoshiro256** (splitmix64 seeding)";

    explicit Xoshiro256(std::uint64_t seed);

    std::uint64_t next();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer on [lo, hi] (inclusive).
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

  private:
    std::array<std::uint64_t, 4> s_;
};

/// Derive an independent stream seed for trial `index` of a suite.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace lubchain
