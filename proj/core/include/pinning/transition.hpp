#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pinning/disorder.hpp"
#include "pinning/kernel.hpp"
#include "pinning/polymer.hpp"
#include "pinning/thermo.hpp"

namespace pinning {

// ---------------------------------------------------------------------------
// Critical point

enum class Phase { Supercritical, Subcritical, Undecided };

std::string to_string(Phase phase);

/// Everything measured at one h while locating h_c.
struct PhaseEvidence {
    double h = 0.0;
    FreeEnergyEstimate estimate;
    double annealed = 0.0;
    /// Tightest available upper bound on f: min(bracket hi, annealed f).
    double upper = 0.0;
    double width = 0.0;  // bracket hi - lo
    Phase phase = Phase::Undecided;
};

struct CriticalConfig {
    std::size_t N = 256;
    std::size_t replicas = 200;
    double h_min = -1.0;
    double h_max = 1.0;
    /// A point is subcritical when upper <= threshold_multiplier * width. The
    /// default 0 accepts only a vanishing upper bound as evidence.
    double threshold_multiplier = 0.0;
    /// A point is supercritical when lo - sigma_multiplier * stderr > 0.
    double sigma_multiplier = 3.0;
    /// Bisection stops once the interval is shorter than this.
    double tolerance = 1e-3;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct CriticalEstimate {
    double beta = 0.0;
    double h_lo = 0.0;
    double h_hi = 0.0;
    double annealed_point = 0.0;  // -lambda(beta)
    double gap_lo = 0.0;          // h_lo - annealed_point
    /// stderr of the estimates at h_lo and h_hi combined in quadrature
    double combined_std_error = 0.0;
    /// false when the window's left end was not certified subcritical, in
    /// which case h_lo is just the window edge
    bool lower_certified = false;
    std::vector<PhaseEvidence> evidence;
    CriticalConfig config;
};

/// Classifies a single h. Environments are shared across calls so that the
/// classification is monotone in h on a fixed sample.
class PhaseProbe {
  public:
    PhaseProbe(const InterArrivalLaw& law, DisorderLaw dlaw, double beta, const CriticalConfig& cfg);
    PhaseEvidence operator()(double h) const;

  private:
    const InterArrivalLaw& law_;
    DisorderLaw dlaw_;
    double beta_;
    CriticalConfig cfg_;
    std::vector<Environment> envs_;
    DoublingConstant doubling_;
};

/// Bisection for the supercritical boundary (h_hi) and, when the left end is
/// certified subcritical, for the subcritical boundary (h_lo). Throws
/// ValidationError when the window does not bracket the transition.
CriticalEstimate estimate_critical_point(const InterArrivalLaw& law, DisorderLaw dlaw, double beta,
                                         const CriticalConfig& cfg);

struct RelevanceGap {
    double value = 0.0;        // h_lo + lambda(beta)
    double uncertainty = 0.0;  // h_hi - h_lo
    CriticalEstimate estimate;
};

RelevanceGap relevance_gap(const InterArrivalLaw& law, DisorderLaw dlaw, double beta, const CriticalConfig& cfg);

// ---------------------------------------------------------------------------
// Contact fraction

struct ContactFractionPoint {
    double h = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
};

/// Disorder-averaged expected_contacts / N on each grid point, using the same
/// replicas for every h.
std::vector<ContactFractionPoint> contact_fraction_curve(const InterArrivalLaw& law, DisorderLaw dlaw, double beta,
                                                         std::span<const double> h_grid, std::size_t N,
                                                         std::size_t replicas, std::uint64_t seed,
                                                         unsigned threads = 1);

/// Finite-N contact fraction, which bounds d f / d h from above for
/// log-convex kernels. Throws NotApplicable otherwise.
ContactFractionPoint contact_fraction_upper_bound(const InterArrivalLaw& law, DisorderLaw dlaw, PolymerParams params,
                                                  std::size_t N, std::size_t replicas, std::uint64_t seed,
                                                  unsigned threads = 1);

// ---------------------------------------------------------------------------
// Smoothing exponent

struct CurvePoint {
    double u = 0.0;  // distance above the critical point
    double f = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
};

struct ExponentFit {
    double zeta = 0.0;
    double nu_hat = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    double r_squared = 0.0;
    double band_lo = 0.0;
    double band_hi = 0.0;
    std::size_t points_used = 0;
    /// nu_hat inside [band_lo, band_hi]; a flag, not a failure
    bool in_band = false;
};

/// Admissible range for the vanishing exponent:
/// zeta <= 1/2 -> [2(1-zeta), (1-zeta)/zeta]; zeta > 1/2 -> [1, 1].
std::pair<double, double> smoothing_exponent_band(double zeta);

/// Least-squares slope of log f against log u over points with f_lo > 0.
ExponentFit fit_smoothing_exponent(std::span<const CurvePoint> curve, double zeta);

// ---------------------------------------------------------------------------
// FKG

using SubsetFunction = std::function<double(Subset)>;

struct FunctionPair {
    std::string name;
    SubsetFunction f;
    SubsetFunction g;
};

/// Total count against every indicator, and a constant against the count.
std::vector<FunctionPair> default_fkg_functions(std::size_t N);

struct FkgReport {
    std::size_t N = 0;
    double min_covariance = 0.0;
    std::pair<std::size_t, std::size_t> worst_pair{0, 0};
    double min_function_covariance = 0.0;
    std::string worst_function_pair;
    /// min log [P(t u t') P(t n t') / (P(t) P(t'))] over the sampled pairs
    double min_lattice_log_ratio = 0.0;
    std::size_t lattice_pairs_tested = 0;
    bool lattice_condition_ok = true;
    bool kernel_log_convex = false;

    bool positive(double tol = 1e-12) const {
        return min_covariance >= -tol && min_function_covariance >= -tol && lattice_condition_ok;
    }
};

inline constexpr std::size_t fkg_cap = 12;

FkgReport fkg_brute_force_test(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N,
                               std::span<const FunctionPair> function_pairs = {}, std::size_t lattice_pairs = 1000,
                               std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Rare-region strategy

struct RareRegionResult {
    std::optional<std::size_t> X0;  // first block whose sum is >= u sqrt(N_block)
    double M = 0.0;                 // u exp(u^2 / 2)
    bool within = false;            // X0 <= M - 2
    std::size_t blocks_scanned = 0;
};

/// Streams fresh blocks of disorder; memory is O(1) in max_blocks.
RareRegionResult rare_region_scan(DisorderLaw dlaw, std::size_t N_block, double u, std::size_t max_blocks,
                                  std::uint64_t seed);

struct RareRegionSummary {
    std::size_t trials = 0;
    double M = 0.0;
    double within_frequency = 0.0;
    double within_std_error = 0.0;
    /// fraction of trials with X0 == 0, an estimate of P(block sum >= u sqrt(N_block))
    double first_block_frequency = 0.0;
    double first_block_std_error = 0.0;
    std::size_t not_found = 0;
};

RareRegionSummary rare_region_frequency(DisorderLaw dlaw, std::size_t N_block, double u, std::size_t max_blocks,
                                        std::size_t trials, std::uint64_t master_seed, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Fluctuations

struct FluctuationPoint {
    std::size_t N = 0;
    double variance = 0.0;           // sample variance of log Z_N
    double variance_per_site = 0.0;  // variance / N
};

std::vector<FluctuationPoint> fluctuation_diagnostic(const InterArrivalLaw& law, DisorderLaw dlaw,
                                                     PolymerParams params, std::span<const std::size_t> N_list,
                                                     std::size_t replicas, std::uint64_t seed, unsigned threads = 1);

}  // namespace pinning
