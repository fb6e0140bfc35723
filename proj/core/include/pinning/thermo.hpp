#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pinning/disorder.hpp"
#include "pinning/kernel.hpp"
#include "pinning/polymer.hpp"

namespace pinning {

/// Residual target for the pure-model root.
inline constexpr double pure_root_tolerance = 1e-13;

/// f(0, h): zero for h <= 0, otherwise the b > 0 with sum_n K(n) e^{-b n} = e^{-h}.
double pure_free_energy(const InterArrivalLaw& law, double h);

/// sum_n K(n) e^{-b n} - e^{-h}, including the truncated tail bound.
double pure_root_residual(const InterArrivalLaw& law, double h, double b);

/// f(0, h + lambda(beta)); vanishes for h <= -lambda(beta).
double annealed_free_energy(const InterArrivalLaw& law, DisorderLaw dlaw, double beta, double h);

struct DoublingConstant {
    /// c = 2 log(2 C)
    double c_value = 0.0;
    /// C = max(1, max K(b-a) / (K(N-a) K(b-N) e^{N^zeta}))
    double C = 1.0;
    std::size_t n_range = 0;
    /// (N, a, b) attaining the maximum
    std::size_t arg_N = 0, arg_a = 0, arg_b = 0;
    /// max over triples of (N-a)^zeta + (b-N)^zeta - (b-a)^zeta - N^zeta; must be <= 0
    double worst_exponent_gap = 0.0;
};

/// Exhaustive scan over N <= n_range and 0 <= a < N < b <= 2N. Requires a
/// stretched law with full support and n_range <= n_max / 2.
DoublingConstant compute_doubling_constant(const InterArrivalLaw& law, std::size_t n_range);

/// Default scan horizon: min(64, n_max / 2).
std::size_t default_doubling_range(const InterArrivalLaw& law);

/// Both variants of the linear correction term: (lambda(beta)+h)_+ as stated and
/// (lambda(-beta)-h)_+ as used in the derivation. The bracket uses the larger.
struct BracketCorrection {
    double stated = 0.0;
    double derived = 0.0;
    double used() const { return stated > derived ? stated : derived; }
};

BracketCorrection bracket_correction(DisorderLaw dlaw, PolymerParams params);

/// Width N^{zeta-1}/(1-2^{zeta-1}) + (2 * correction + c)/N of the
/// finite-volume bracket.
double bracket_width(const InterArrivalLaw& law, DisorderLaw dlaw, PolymerParams params, std::size_t N,
                     const DoublingConstant& c);

/// (lo, hi) with lo = estimate_mean and hi = lo + bracket_width. Throws
/// NotApplicable for non-stretched laws.
std::pair<double, double> finite_volume_bracket(double estimate_mean, std::size_t N, PolymerParams params,
                                                const InterArrivalLaw& law, DisorderLaw dlaw,
                                                const DoublingConstant& c);

struct SampleSummary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (R - 1 denominator)
    double std_error = 0.0;
    std::size_t count = 0;
};

/// Order-independent summary: values are sorted before compensated summation.
SampleSummary summarize(std::span<const double> values);

struct FreeEnergyEstimate {
    std::size_t N = 0;
    std::size_t replicas = 0;
    double mean_per_site = 0.0;
    double std_error = 0.0;
    double bracket_lo = 0.0;
    /// +inf when the law is not stretched (no finite-volume bracket).
    double bracket_hi = 0.0;
    PolymerParams params;
};

/// Monte Carlo mean of (1/N) log Z_N over replicas derived from master_seed.
FreeEnergyEstimate quenched_free_energy_estimate(const InterArrivalLaw& law, DisorderLaw dlaw, PolymerParams params,
                                                 std::size_t N, std::size_t replicas, std::uint64_t master_seed,
                                                 unsigned threads = 1);

/// Same estimator on a fixed set of environments (common random numbers across h).
FreeEnergyEstimate quenched_free_energy_estimate(const InterArrivalLaw& law, DisorderLaw dlaw, PolymerParams params,
                                                 std::size_t N, std::span<const Environment> environments,
                                                 const DoublingConstant* doubling, unsigned threads = 1);

}  // namespace pinning
