#pragma once

#include <cstdint>
#include <random>

namespace pinning {

/// Version of the seed-derivation contract. Bump whenever derive_seed or the
/// variate transforms change, since stored experiments depend on them.
inline constexpr int seed_scheme_version = 1;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of replica `index` under `master`:
///   splitmix64(master + 0x9E3779B97F4A7C15 * (index + 1)).
/// Stable across platforms and independent of thread count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Portable variate source on top of mt19937_64. The standard
/// distributions are implementation-defined, so the transforms here are
/// spelled out to keep streams bit-identical across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double gaussian();

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pinning
