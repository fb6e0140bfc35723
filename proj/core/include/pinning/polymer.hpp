#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pinning/kernel.hpp"

namespace pinning {

struct PolymerParams {
    double beta = 0.0;
    double h = 0.0;
};

/// Contact sets are bitmasks over sites 1..N: bit (n-1) is set iff n in tau.
using Subset = std::uint32_t;

inline constexpr std::size_t brute_force_cap = 20;
inline constexpr std::size_t exact_measure_cap = 14;
inline constexpr std::size_t contact_count_default_cap = 512;

/// Environment arguments are spans with omega[n-1] = omega_n; only the first N
/// entries are read.
using Omega = std::span<const double>;

/// Forward table L[0..N]: L[0] = 0 and
///   L[n] = (beta omega_n + h) + logsumexp_k (log K(k) + L[n-k]),
/// so L[n] = log Z_n. Site n's energy lives in L[n] only.
std::vector<double> forward_log_table(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N);

/// log Z_N, endpoint pinned at N. O(N^2).
double log_partition(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N);

/// Exhaustive sum over the 2^(N-1) contact sets containing N.
double brute_force_log_partition(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N);

/// log Z_[a,b] = (beta omega_a + h) 1_{a>0} + log Z_{b-a}(theta^a omega), with Z_0 = 1.
double log_partition_segment(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t a,
                             std::size_t b);

struct PartitionComputation {
    double log_z = 0.0;
    /// p[n] = P(n in tau) for n = 0..N; p[0] = p[N] = 1.
    std::vector<double> contact_probabilities;
    /// sum_{n=1}^N p[n]
    double expected_contacts = 0.0;
};

/// Forward-backward contact marginals.
PartitionComputation contact_profile(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N);

struct ContactCountWeights {
    std::size_t N = 0;
    /// log_w[m] = log of the weight of paths with exactly m contacts in (0,N];
    /// index 0 is always -inf.
    std::vector<double> log_w;
    double log_z = 0.0;

    /// log Z(A^eps), m <= floor(eps N).
    double log_z_low(double eps) const;
    /// log Z(B^eps), m > floor(eps N).
    double log_z_high(double eps) const;
    /// Polymer probability of B^eps.
    double probability_high(double eps) const;
};

ContactCountWeights contact_count_logweights(const InterArrivalLaw& law, Omega omega, PolymerParams params,
                                             std::size_t N, std::size_t cap = contact_count_default_cap);

/// Exact polymer law on contact sets containing N.
class PolymerMeasure {
  public:
    PolymerMeasure(std::size_t N, std::vector<double> probabilities)
        : N_(N), probabilities_(std::move(probabilities)) {}

    std::size_t N() const { return N_; }
    /// Number of atoms, 2^(N-1).
    std::size_t size() const { return probabilities_.size(); }
    /// Atom index i encodes sites 1..N-1 in its bits; the subset adds N.
    Subset subset(std::size_t i) const { return static_cast<Subset>(i) | (Subset{1} << (N_ - 1)); }
    double probability_at(std::size_t i) const { return probabilities_[i]; }
    /// Probability of a subset; zero unless it contains N and lies in [1, N].
    double probability(Subset s) const;
    /// E[f(tau)]
    template <class F>
    double expectation(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < probabilities_.size(); ++i) acc += probabilities_[i] * f(subset(i));
        return acc;
    }

  private:
    std::size_t N_;
    std::vector<double> probabilities_;
};

PolymerMeasure exact_polymer_measure(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N);

/// log of the unnormalized weight prod K(gaps) * exp(sum (beta omega + h)) of one contact set.
double log_path_weight(const InterArrivalLaw& law, Omega omega, PolymerParams params, Subset s, std::size_t N);

}  // namespace pinning
