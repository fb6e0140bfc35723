#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pinning {

/// K(n) proportional to exp(-n^zeta), 0 < zeta < 1.
struct Stretched {
    double zeta;
};

/// K(n) proportional to n^-(1+alpha), alpha > 0.
struct PowerLaw {
    double alpha;
};

/// Explicit gap -> mass table with finite support; masses are renormalized.
struct Custom {
    std::map<std::size_t, double> table;
};

using KernelFamily = std::variant<Stretched, PowerLaw, Custom>;

struct KernelSpec {
    KernelFamily family;
    /// Table horizon. For Custom laws the horizon is at least the largest gap.
    std::size_t n_max = 0;
    /// Largest mass allowed beyond n_max after normalization.
    double tail_tolerance = 1e-14;
};

std::string family_name(const KernelFamily& family);

/// Normalized renewal inter-arrival law with masses stored as logarithms.
///
/// Index n of `log_mass()` holds log K(n) for n in 1..n_max; index 0 is -inf.
/// Immutable after construction; safe to share between threads.
class InterArrivalLaw {
  public:
    const KernelSpec& spec() const { return spec_; }
    std::size_t n_max() const { return log_mass_.size() - 1; }

    double log_mass(std::size_t n) const;
    std::span<const double> log_mass_table() const { return log_mass_; }
    /// Linear masses, same indexing as log_mass_table().
    std::span<const double> mass_table() const { return mass_; }

    /// Logarithm of the normalizing sum (full support including the tail).
    double log_norm() const { return log_norm_; }
    /// Mass beyond n_max (certified upper bound for Stretched/PowerLaw).
    double truncated_tail_mass() const { return truncated_tail_mass_; }
    double mean_gap() const { return mean_gap_; }

    /// zeta when the family is Stretched.
    std::optional<double> zeta() const;
    /// True when K(n) > 0 for every n in 1..n_max.
    bool full_support() const { return full_support_; }
    /// True when K(n) = 0 exactly beyond n_max (Custom tables), so horizons
    /// past the table are well-defined.
    bool exact_beyond_table() const { return std::holds_alternative<Custom>(spec_.family); }

    /// Smallest n with P(tau_1 <= n) >= u * P(tau_1 <= n_max); used for sampling.
    std::size_t quantile(double u) const;

  private:
    friend InterArrivalLaw build_kernel(const KernelSpec& spec);
    InterArrivalLaw() = default;

    KernelSpec spec_;
    std::vector<double> log_mass_;
    std::vector<double> mass_;
    std::vector<double> cdf_;
    double log_norm_ = 0.0;
    double truncated_tail_mass_ = 0.0;
    double mean_gap_ = 0.0;
    bool full_support_ = false;
};

/// Builds and normalizes a law.
///
/// For Stretched the normalizer is sum_{n<=n_max} e^{-n^zeta} plus the integral
/// bound int_{n_max}^inf e^{-x^zeta} dx = Gamma(1/zeta, n_max^zeta)/zeta, and the
/// bound itself is recorded as the truncated mass. Throws ValidationError when
/// parameters are out of range or n_max cannot meet spec.tail_tolerance.
InterArrivalLaw build_kernel(const KernelSpec& spec);

/// Smallest horizon for which the stretched tail bound is below `tolerance`.
std::size_t minimal_horizon(double zeta, double tolerance);

/// E[tau_1]: table sum plus tail correction. Infinite for PowerLaw with alpha <= 1.
double mean_gap(const InterArrivalLaw& law);

struct LogConvexityReport {
    bool applicable = true;   // false when the support has gaps
    bool holds = true;
    /// min over 1 < l <= n < n_max of log K(n+1) + log K(l-1) - log K(n) - log K(l)
    double worst_slack = 0.0;
    std::optional<std::pair<std::size_t, std::size_t>> witness;  // (n, l)
    std::string note;
};

inline constexpr double log_convexity_tolerance = 1e-12;

/// Exhaustive check of K(n+1) K(l-1) >= K(n) K(l). Uses the equivalent
/// statement that the increments d(j) = log K(j+1) - log K(j) are
/// non-decreasing, which reduces the pair scan to a running maximum.
LogConvexityReport check_log_convexity(const InterArrivalLaw& law);

/// u[n] = P(n in tau) for n = 0..N via u[n] = sum_k K(k) u[n-k].
/// N may exceed n_max only when exact_beyond_table().
std::vector<double> renewal_mass_function(const InterArrivalLaw& law, std::size_t N);

/// Renewal points in [0, N], starting at 0. Gaps are drawn from K restricted
/// to 1..n_max (the truncated mass is at most the tail tolerance).
std::vector<std::size_t> sample_renewal(const InterArrivalLaw& law, std::size_t N, std::uint64_t seed);

}  // namespace pinning
