#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pinning/random.hpp"

namespace pinning {

/// Centered, unit-variance single-site laws.
enum class DisorderLaw { Gaussian, Rademacher, UniformSym };

std::string to_string(DisorderLaw law);
DisorderLaw parse_disorder_law(const std::string& name);

/// Frozen realization omega_1..omega_N. values()[n-1] holds omega_n.
class Environment {
  public:
    Environment() = default;
    Environment(DisorderLaw law, std::uint64_t seed, std::vector<double> values)
        : law_(law), seed_(seed), values_(std::move(values)) {}

    DisorderLaw law() const { return law_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t size() const { return values_.size(); }
    /// 1-based access, omega(1) is the first site.
    double omega(std::size_t n) const { return values_[n - 1]; }
    std::span<const double> values() const { return values_; }

    friend bool operator==(const Environment&, const Environment&) = default;

  private:
    DisorderLaw law_ = DisorderLaw::Gaussian;
    std::uint64_t seed_ = 0;
    std::vector<double> values_;
};

Environment sample_environment(DisorderLaw law, std::size_t N, std::uint64_t seed);

/// Replica k is sample_environment(law, N, derive_seed(master_seed, k)).
std::vector<Environment> sample_replicas(DisorderLaw law, std::size_t N, std::uint64_t master_seed,
                                         std::size_t replicas, unsigned threads = 1);

/// lambda(beta) = log E[exp(beta * omega)].
double log_mgf(DisorderLaw law, double beta);

/// omega_n + delta at every site. Shifting h by delta equals tilting the
/// environment by delta / beta.
Environment tilt(const Environment& env, double delta);

/// Draws one variate of `law` from `rng`. Exposed for streaming consumers.
double draw(DisorderLaw law, Rng& rng);

}  // namespace pinning
