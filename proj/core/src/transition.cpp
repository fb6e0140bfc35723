#include "pinning/transition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "pinning/error.hpp"
#include "pinning/logspace.hpp"
#include "pinning/parallel.hpp"
#include "pinning/random.hpp"

namespace pinning {

std::string to_string(Phase phase) {
    switch (phase) {
        case Phase::Supercritical: return "supercritical";
        case Phase::Subcritical: return "subcritical";
        case Phase::Undecided: return "undecided";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------

PhaseProbe::PhaseProbe(const InterArrivalLaw& law, DisorderLaw dlaw, double beta, const CriticalConfig& cfg)
    : law_(law), dlaw_(dlaw), beta_(beta), cfg_(cfg) {
    if (!law.zeta()) throw NotApplicable("critical-point estimation needs a stretched kernel (bracket uses zeta)");
    if (cfg.N == 0 || cfg.N > law.n_max()) throw ValidationError("critical: N outside the kernel table");
    if (cfg.replicas < 2) throw ValidationError("critical: need at least 2 replicas");
    if (!(beta >= 0.0)) throw ValidationError("critical: beta must be non-negative");
    envs_ = sample_replicas(dlaw, cfg.N, cfg.seed, cfg.replicas, cfg.threads);
    doubling_ = compute_doubling_constant(law, default_doubling_range(law));
}

PhaseEvidence PhaseProbe::operator()(double h) const {
    PhaseEvidence ev;
    ev.h = h;
    const PolymerParams params{beta_, h};
    ev.estimate = quenched_free_energy_estimate(law_, dlaw_, params, cfg_.N, envs_, &doubling_, cfg_.threads);
    ev.annealed = annealed_free_energy(law_, dlaw_, beta_, h);
    ev.width = ev.estimate.bracket_hi - ev.estimate.bracket_lo;
    ev.upper = std::min(ev.estimate.bracket_hi, ev.annealed);
    if (ev.estimate.bracket_lo - cfg_.sigma_multiplier * ev.estimate.std_error > 0.0)
        ev.phase = Phase::Supercritical;
    else if (ev.upper <= cfg_.threshold_multiplier * ev.width)
        ev.phase = Phase::Subcritical;
    else
        ev.phase = Phase::Undecided;
    return ev;
}

CriticalEstimate estimate_critical_point(const InterArrivalLaw& law, DisorderLaw dlaw, double beta,
                                         const CriticalConfig& cfg) {
    if (!(cfg.h_min < cfg.h_max)) throw ValidationError("critical: h window must satisfy h_min < h_max");
    if (!(cfg.tolerance > 0.0)) throw ValidationError("critical: tolerance must be positive");
    const PhaseProbe probe(law, dlaw, beta, cfg);

    CriticalEstimate out;
    out.beta = beta;
    out.config = cfg;
    out.annealed_point = 0.0 - log_mgf(dlaw, beta);

    auto eval = [&](double h) {
        out.evidence.push_back(probe(h));
        return out.evidence.back();
    };

    const auto left = eval(cfg.h_min);
    const auto right = eval(cfg.h_max);
    if (left.phase == Phase::Supercritical || right.phase != Phase::Supercritical) {
        std::ostringstream os;
        os << "critical: window [" << cfg.h_min << ", " << cfg.h_max << "] does not bracket the transition ("
           << "left " << to_string(left.phase) << " with lo=" << left.estimate.bracket_lo
           << ", right " << to_string(right.phase) << " with lo=" << right.estimate.bracket_lo
           << " stderr=" << right.estimate.std_error << ")";
        throw ValidationError(os.str());
    }

    double a = cfg.h_min;
    double b = cfg.h_max;
    PhaseEvidence at_hi = right;
    while (b - a > cfg.tolerance) {
        const double mid = 0.5 * (a + b);
        const auto ev = eval(mid);
        if (ev.phase == Phase::Supercritical) {
            b = mid;
            at_hi = ev;
        } else {
            a = mid;
        }
    }
    out.h_hi = b;

    PhaseEvidence at_lo = left;
    if (left.phase == Phase::Subcritical) {
        double s = cfg.h_min;
        double t = a;
        while (t - s > cfg.tolerance) {
            const double mid = 0.5 * (s + t);
            const auto ev = eval(mid);
            if (ev.phase == Phase::Subcritical) {
                s = mid;
                at_lo = ev;
            } else {
                t = mid;
            }
        }
        out.h_lo = s;
        out.lower_certified = true;
    } else {
        out.h_lo = cfg.h_min;
    }
    out.gap_lo = out.h_lo - out.annealed_point;
    out.combined_std_error = std::hypot(at_lo.estimate.std_error, at_hi.estimate.std_error);
    return out;
}

RelevanceGap relevance_gap(const InterArrivalLaw& law, DisorderLaw dlaw, double beta, const CriticalConfig& cfg) {
    RelevanceGap g;
    g.estimate = estimate_critical_point(law, dlaw, beta, cfg);
    g.value = g.estimate.gap_lo;
    g.uncertainty = g.estimate.h_hi - g.estimate.h_lo;
    return g;
}

// ---------------------------------------------------------------------------

std::vector<ContactFractionPoint> contact_fraction_curve(const InterArrivalLaw& law, DisorderLaw dlaw, double beta,
                                                         std::span<const double> h_grid, std::size_t N,
                                                         std::size_t replicas, std::uint64_t seed, unsigned threads) {
    if (replicas == 0) throw ValidationError("contact_fraction_curve: need at least one replica");
    const auto envs = sample_replicas(dlaw, N, seed, replicas, threads);
    std::vector<ContactFractionPoint> out;
    out.reserve(h_grid.size());
    for (double h : h_grid) {
        const auto fractions = parallel_map(replicas, threads, [&](std::size_t k) {
            return contact_profile(law, envs[k].values(), {beta, h}, N).expected_contacts / static_cast<double>(N);
        });
        const auto s = summarize(fractions);
        out.push_back({h, s.mean, s.std_error});
    }
    return out;
}

ContactFractionPoint contact_fraction_upper_bound(const InterArrivalLaw& law, DisorderLaw dlaw, PolymerParams params,
                                                  std::size_t N, std::size_t replicas, std::uint64_t seed,
                                                  unsigned threads) {
    const auto report = check_log_convexity(law);
    if (!report.applicable)
        throw NotApplicable("contact fraction bounds the slope of f only for log-convex kernels; " + report.note);
    if (!report.holds) {
        std::ostringstream os;
        os << "contact fraction bounds the slope of f only for log-convex kernels; log-convexity fails with slack "
           << report.worst_slack;
        if (report.witness) os << " at (n, l) = (" << report.witness->first << ", " << report.witness->second << ")";
        throw NotApplicable(os.str());
    }
    const double h = params.h;
    return contact_fraction_curve(law, dlaw, params.beta, std::span<const double>(&h, 1), N, replicas, seed,
                                  threads)
        .front();
}

// ---------------------------------------------------------------------------

std::pair<double, double> smoothing_exponent_band(double zeta) {
    if (!(zeta > 0.0 && zeta < 1.0)) throw ValidationError("exponent band requires zeta in (0,1)");
    if (zeta > 0.5) return {1.0, 1.0};
    return {2.0 * (1.0 - zeta), (1.0 - zeta) / zeta};
}

ExponentFit fit_smoothing_exponent(std::span<const CurvePoint> curve, double zeta) {
    ExponentFit fit;
    fit.zeta = zeta;
    std::tie(fit.band_lo, fit.band_hi) = smoothing_exponent_band(zeta);

    std::vector<std::pair<double, double>> pts;
    for (const auto& p : curve) {
        if (!(p.u > 0.0)) throw ValidationError("fit_smoothing_exponent: u values must be strictly positive");
        if (p.f_lo > 0.0 && p.f > 0.0) pts.emplace_back(std::log(p.u), std::log(p.f));
    }
    if (pts.size() < 4) {
        std::ostringstream os;
        os << "fit_smoothing_exponent: need at least 4 points with f_lo > 0, have " << pts.size();
        throw ValidationError(os.str());
    }
    fit.points_used = pts.size();
    fit.u_min = std::numeric_limits<double>::infinity();
    fit.u_max = 0.0;
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts) {
        mx += x;
        my += y;
        fit.u_min = std::min(fit.u_min, std::exp(x));
        fit.u_max = std::max(fit.u_max, std::exp(x));
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (auto [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) throw ValidationError("fit_smoothing_exponent: all u values coincide");
    fit.nu_hat = sxy / sxx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.in_band = fit.nu_hat >= fit.band_lo && fit.nu_hat <= fit.band_hi;
    return fit;
}

// ---------------------------------------------------------------------------

std::vector<FunctionPair> default_fkg_functions(std::size_t N) {
    std::vector<FunctionPair> pairs;
    const SubsetFunction count = [](Subset s) { return static_cast<double>(std::popcount(s)); };
    for (std::size_t i = 1; i <= N; ++i) {
        const Subset bit = Subset{1} << (i - 1);
        pairs.push_back({"count~delta_" + std::to_string(i), count,
                         [bit](Subset s) { return (s & bit) ? 1.0 : 0.0; }});
    }
    pairs.push_back({"const~count", [](Subset) { return 1.0; }, count});
    return pairs;
}

FkgReport fkg_brute_force_test(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N,
                               std::span<const FunctionPair> function_pairs, std::size_t lattice_pairs,
                               std::uint64_t seed) {
    if (N > fkg_cap) {
        std::ostringstream os;
        os << "fkg: N=" << N << " above cap " << fkg_cap << " (exhaustive measure has 2^(N-1) atoms)";
        throw ValidationError(os.str());
    }
    const auto measure = exact_polymer_measure(law, omega, params, N);
    FkgReport rep;
    rep.N = N;
    const auto lc = check_log_convexity(law);
    rep.kernel_log_convex = lc.applicable && lc.holds;

    // marginals and pairwise joints
    std::vector<double> p(N + 1, 0.0);
    std::vector<double> joint((N + 1) * (N + 1), 0.0);
    for (std::size_t a = 0; a < measure.size(); ++a) {
        const double w = measure.probability_at(a);
        const Subset s = measure.subset(a);
        for (std::size_t i = 1; i <= N; ++i) {
            if (!(s >> (i - 1) & 1u)) continue;
            p[i] += w;
            for (std::size_t j = i + 1; j <= N; ++j)
                if (s >> (j - 1) & 1u) joint[i * (N + 1) + j] += w;
        }
    }
    rep.min_covariance = std::numeric_limits<double>::infinity();
    if (N < 2) rep.min_covariance = 0.0;
    for (std::size_t i = 1; i <= N; ++i) {
        for (std::size_t j = i + 1; j <= N; ++j) {
            const double cov = joint[i * (N + 1) + j] - p[i] * p[j];
            if (cov < rep.min_covariance) {
                rep.min_covariance = cov;
                rep.worst_pair = {i, j};
            }
        }
    }

    const auto defaults = function_pairs.empty() ? default_fkg_functions(N) : std::vector<FunctionPair>{};
    const auto pairs = function_pairs.empty() ? std::span<const FunctionPair>(defaults) : function_pairs;
    rep.min_function_covariance = std::numeric_limits<double>::infinity();
    for (const auto& fp : pairs) {
        const double efg = measure.expectation([&](Subset s) { return fp.f(s) * fp.g(s); });
        const double ef = measure.expectation(fp.f);
        const double eg = measure.expectation(fp.g);
        const double cov = efg - ef * eg;
        if (cov < rep.min_function_covariance) {
            rep.min_function_covariance = cov;
            rep.worst_function_pair = fp.name;
        }
    }
    if (pairs.empty()) rep.min_function_covariance = 0.0;

    // Lattice condition in unnormalized log weights; the normalizer cancels.
    Rng rng(seed);
    const Subset endpoint = Subset{1} << (N - 1);
    const Subset inner_mask = endpoint - 1;
    rep.min_lattice_log_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < lattice_pairs; ++t) {
        const Subset s1 = (static_cast<Subset>(rng.bits()) & inner_mask) | endpoint;
        const Subset s2 = (static_cast<Subset>(rng.bits()) & inner_mask) | endpoint;
        const double w1 = log_path_weight(law, omega, params, s1, N);
        const double w2 = log_path_weight(law, omega, params, s2, N);
        ++rep.lattice_pairs_tested;
        if (w1 == neg_inf || w2 == neg_inf) continue;
        const double wu = log_path_weight(law, omega, params, s1 | s2, N);
        const double wi = log_path_weight(law, omega, params, s1 & s2, N);
        const double r = (wu + wi) - (w1 + w2);
        rep.min_lattice_log_ratio = std::min(rep.min_lattice_log_ratio, r);
    }
    if (rep.min_lattice_log_ratio == std::numeric_limits<double>::infinity()) rep.min_lattice_log_ratio = 0.0;
    rep.lattice_condition_ok = rep.min_lattice_log_ratio >= std::log1p(-1e-12);
    return rep;
}

// ---------------------------------------------------------------------------

RareRegionResult rare_region_scan(DisorderLaw dlaw, std::size_t N_block, double u, std::size_t max_blocks,
                                  std::uint64_t seed) {
    if (!(u >= 1.0)) throw ValidationError("rare_region_scan: u must be at least 1");
    if (N_block == 0) throw ValidationError("rare_region_scan: N_block must be at least 1");
    RareRegionResult r;
    r.M = u * std::exp(0.5 * u * u);
    const double threshold = u * std::sqrt(static_cast<double>(N_block));
    Rng rng(seed);
    for (std::size_t x = 0; x < max_blocks; ++x) {
        double sum = 0.0;
        for (std::size_t n = 0; n < N_block; ++n) sum += draw(dlaw, rng);
        ++r.blocks_scanned;
        if (sum >= threshold) {
            r.X0 = x;
            break;
        }
    }
    r.within = r.X0 && static_cast<double>(*r.X0) <= r.M - 2.0;
    return r;
}

RareRegionSummary rare_region_frequency(DisorderLaw dlaw, std::size_t N_block, double u, std::size_t max_blocks,
                                        std::size_t trials, std::uint64_t master_seed, unsigned threads) {
    if (trials == 0) throw ValidationError("rare_region_frequency: need at least one trial");
    const auto results = parallel_map(trials, threads, [&](std::size_t t) {
        return rare_region_scan(dlaw, N_block, u, max_blocks, derive_seed(master_seed, t));
    });
    RareRegionSummary s;
    s.trials = trials;
    s.M = results.front().M;
    std::size_t within = 0, first = 0;
    for (const auto& r : results) {
        within += r.within ? 1 : 0;
        first += (r.X0 && *r.X0 == 0) ? 1 : 0;
        s.not_found += r.X0 ? 0 : 1;
    }
    const double T = static_cast<double>(trials);
    s.within_frequency = static_cast<double>(within) / T;
    s.within_std_error = std::sqrt(s.within_frequency * (1.0 - s.within_frequency) / T);
    s.first_block_frequency = static_cast<double>(first) / T;
    s.first_block_std_error = std::sqrt(s.first_block_frequency * (1.0 - s.first_block_frequency) / T);
    return s;
}

// ---------------------------------------------------------------------------

std::vector<FluctuationPoint> fluctuation_diagnostic(const InterArrivalLaw& law, DisorderLaw dlaw,
                                                     PolymerParams params, std::span<const std::size_t> N_list,
                                                     std::size_t replicas, std::uint64_t seed, unsigned threads) {
    if (replicas < 30) throw ValidationError("fluctuation_diagnostic: need at least 30 replicas");
    std::vector<FluctuationPoint> out;
    for (std::size_t N : N_list) {
        const auto envs = sample_replicas(dlaw, N, seed, replicas, threads);
        const auto logz = parallel_map(replicas, threads,
                                       [&](std::size_t k) { return log_partition(law, envs[k].values(), params, N); });
        const auto s = summarize(logz);
        FluctuationPoint p;
        p.N = N;
        p.variance = s.stddev * s.stddev;
        p.variance_per_site = p.variance / static_cast<double>(N);
        out.push_back(p);
    }
    return out;
}

}  // namespace pinning
