#include "pinning/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pinning/error.hpp"
#include "pinning/logspace.hpp"
#include "pinning/parallel.hpp"

namespace pinning {

namespace {

struct GeneratingFunction {
    double value;       // sum K(n) e^{-bn}
    double derivative;  // -sum n K(n) e^{-bn}
};

GeneratingFunction laplace_transform(const InterArrivalLaw& law, double b) {
    const auto lk = law.log_mass_table();
    const bool decreasing = law.spec().family.index() != 2;  // stretched and power-law masses decrease
    CompensatedSum value;
    CompensatedSum moment;
    for (std::size_t n = 1; n < lk.size(); ++n) {
        const double e = lk[n] - b * static_cast<double>(n);
        if (e == neg_inf) continue;
        if (decreasing && e < -745.0 && b > 0.0) break;
        const double t = std::exp(e);
        value.add(t);
        moment.add(static_cast<double>(n) * t);
    }
    const double tail = law.truncated_tail_mass() * std::exp(-b * static_cast<double>(law.n_max() + 1));
    value.add(tail);
    return {value.value(), -moment.value()};
}

}  // namespace

double pure_root_residual(const InterArrivalLaw& law, double h, double b) {
    return laplace_transform(law, b).value - std::exp(-h);
}

double pure_free_energy(const InterArrivalLaw& law, double h) {
    if (h <= 0.0) return 0.0;
    const double target = std::exp(-h);
    // G(b) = log g(b) + h is convex and decreasing, so Newton from the left
    // increases monotonically towards the root; bisection guards rounding.
    double lo = 0.0;
    double hi = h + 1.0;
    while (laplace_transform(law, hi).value - target > 0.0) hi *= 2.0;

    double b = 0.0;
    double best_b = 0.0;
    double best_res = laplace_transform(law, 0.0).value - target;
    for (int iter = 0; iter < 500; ++iter) {
        auto g = laplace_transform(law, b);
        const double F = g.value - target;
        if (std::abs(F) < std::abs(best_res)) {
            best_res = F;
            best_b = b;
        }
        const double G = std::log(g.value) + h;
        if (std::abs(G) <= 1e-15) break;
        if (G > 0.0)
            lo = std::max(lo, b);
        else
            hi = std::min(hi, b);
        if (!(hi > lo) || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
        const double slope = g.derivative / g.value;
        double next = slope < 0.0 ? b - G / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi) || next == b) next = 0.5 * (lo + hi);
        b = next;
    }
    if (std::abs(best_res) > pure_root_tolerance) {
        std::ostringstream os;
        os << "pure_free_energy: residual " << best_res << " above " << pure_root_tolerance << " at h=" << h;
        throw NumericalError(os.str());
    }
    return best_b;
}

double annealed_free_energy(const InterArrivalLaw& law, DisorderLaw dlaw, double beta, double h) {
    return pure_free_energy(law, h + log_mgf(dlaw, beta));
}

std::size_t default_doubling_range(const InterArrivalLaw& law) { return std::min<std::size_t>(64, law.n_max() / 2); }

DoublingConstant compute_doubling_constant(const InterArrivalLaw& law, std::size_t n_range) {
    const auto zeta = law.zeta();
    if (!zeta || !law.full_support())
        throw NotApplicable("doubling constant requires a stretched kernel with full support");
    if (n_range == 0 || 2 * n_range > law.n_max()) {
        std::ostringstream os;
        os << "doubling constant: n_range=" << n_range << " must be in [1, n_max/2=" << law.n_max() / 2 << "]";
        throw ValidationError(os.str());
    }
    const auto lk = law.log_mass_table();
    const double z = *zeta;
    DoublingConstant out;
    out.n_range = n_range;
    double best = neg_inf;
    double worst_gap = neg_inf;
    for (std::size_t N = 1; N <= n_range; ++N) {
        const double NZ = std::pow(static_cast<double>(N), z);
        for (std::size_t a = 0; a < N; ++a) {
            for (std::size_t b = N + 1; b <= 2 * N; ++b) {
                const double r = lk[b - a] - lk[N - a] - lk[b - N] - NZ;
                if (r > best) {
                    best = r;
                    out.arg_N = N;
                    out.arg_a = a;
                    out.arg_b = b;
                }
                const double gap = std::pow(static_cast<double>(N - a), z) + std::pow(static_cast<double>(b - N), z) -
                                   std::pow(static_cast<double>(b - a), z) - NZ;
                worst_gap = std::max(worst_gap, gap);
            }
        }
    }
    const double log_C = std::max(0.0, best);
    out.C = std::exp(log_C);
    out.c_value = 2.0 * (std::log(2.0) + log_C);
    out.worst_exponent_gap = worst_gap;
    return out;
}

BracketCorrection bracket_correction(DisorderLaw dlaw, PolymerParams params) {
    const double lam_plus = log_mgf(dlaw, params.beta);
    const double lam_minus = log_mgf(dlaw, -params.beta);
    BracketCorrection c;
    c.stated = std::max(0.0, std::max(lam_plus, lam_minus) + params.h);
    c.derived = std::max(0.0, lam_minus - params.h);
    return c;
}

double bracket_width(const InterArrivalLaw& law, DisorderLaw dlaw, PolymerParams params, std::size_t N,
                     const DoublingConstant& c) {
    const auto zeta = law.zeta();
    if (!zeta) throw NotApplicable("finite-volume bracket requires a stretched kernel");
    const double n = static_cast<double>(N);
    const double z = *zeta;
    return std::pow(n, z - 1.0) / (1.0 - std::pow(2.0, z - 1.0)) +
           (2.0 * bracket_correction(dlaw, params).used() + c.c_value) / n;
}

std::pair<double, double> finite_volume_bracket(double estimate_mean, std::size_t N, PolymerParams params,
                                                const InterArrivalLaw& law, DisorderLaw dlaw,
                                                const DoublingConstant& c) {
    return {estimate_mean, estimate_mean + bracket_width(law, dlaw, params, N, c)};
}

SampleSummary summarize(std::span<const double> values) {
    SampleSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) {
        s.mean = sorted.front();
        return s;
    }
    CompensatedSum sum;
    for (double v : sorted) sum.add(v);
    s.mean = sum.value() / static_cast<double>(s.count);
    if (s.count > 1) {
        CompensatedSum sq;
        for (double v : sorted) sq.add((v - s.mean) * (v - s.mean));
        s.stddev = std::sqrt(sq.value() / static_cast<double>(s.count - 1));
        s.std_error = s.stddev / std::sqrt(static_cast<double>(s.count));
    }
    return s;
}

FreeEnergyEstimate quenched_free_energy_estimate(const InterArrivalLaw& law, DisorderLaw dlaw, PolymerParams params,
                                                 std::size_t N, std::span<const Environment> environments,
                                                 const DoublingConstant* doubling, unsigned threads) {
    if (environments.size() < 2) throw ValidationError("quenched estimate needs at least 2 replicas");
    const auto per_site = parallel_map(environments.size(), threads, [&](std::size_t k) {
        return log_partition(law, environments[k].values(), params, N) / static_cast<double>(N);
    });
    const auto s = summarize(per_site);
    FreeEnergyEstimate est;
    est.N = N;
    est.replicas = environments.size();
    est.mean_per_site = s.mean;
    est.std_error = s.std_error;
    est.params = params;
    est.bracket_lo = s.mean;
    if (doubling && law.zeta()) {
        est.bracket_hi = finite_volume_bracket(s.mean, N, params, law, dlaw, *doubling).second;
    } else {
        est.bracket_hi = std::numeric_limits<double>::infinity();
    }
    return est;
}

FreeEnergyEstimate quenched_free_energy_estimate(const InterArrivalLaw& law, DisorderLaw dlaw, PolymerParams params,
                                                 std::size_t N, std::size_t replicas, std::uint64_t master_seed,
                                                 unsigned threads) {
    if (replicas < 2) throw ValidationError("quenched estimate needs at least 2 replicas");
    if (N == 0 || N > law.n_max()) throw ValidationError("quenched estimate: N outside the kernel table");
    const auto envs = sample_replicas(dlaw, N, master_seed, replicas, threads);
    std::optional<DoublingConstant> doubling;
    if (law.zeta() && law.full_support())
        doubling = compute_doubling_constant(law, default_doubling_range(law));
    return quenched_free_energy_estimate(law, dlaw, params, N, envs, doubling ? &*doubling : nullptr, threads);
}

}  // namespace pinning
