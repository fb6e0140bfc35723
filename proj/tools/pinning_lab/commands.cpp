#include "pinning_lab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pinning/error.hpp"
#include "pinning/logspace.hpp"
#include "pinning/random.hpp"

namespace pinning::cli {

namespace {

std::string str(double x) { return format_real(x); }
std::string str(std::size_t x) { return std::to_string(x); }

std::size_t max_N(const ExperimentConfig& cfg) { return *std::max_element(cfg.N.begin(), cfg.N.end()); }

DoublingConstant doubling_for(const InterArrivalLaw& law, const ExperimentConfig& cfg) {
    return compute_doubling_constant(law, cfg.n_range ? cfg.n_range : default_doubling_range(law));
}

double pure_finite_volume(const InterArrivalLaw& law, double h, std::size_t N) {
    const std::vector<double> zeros(N, 0.0);
    return log_partition(law, zeros, {0.0, h}, N) / static_cast<double>(N);
}

CriticalConfig critical_config(const ExperimentConfig& cfg, std::size_t N) {
    if (!cfg.h_window)
        throw ValidationError("critical: config key 'h_window' is required (e.g. --set h_window=-1,1)");
    CriticalConfig cc;
    cc.N = N;
    cc.replicas = cfg.replicas;
    cc.h_min = cfg.h_window->first;
    cc.h_max = cfg.h_window->second;
    cc.threshold_multiplier = cfg.threshold_multiplier;
    cc.sigma_multiplier = cfg.sigma_multiplier;
    cc.tolerance = cfg.tolerance;
    cc.seed = cfg.master_seed;
    cc.threads = cfg.threads;
    return cc;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    std::vector<double> g(points);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace

const std::vector<std::string>& free_energy_csv_header() {
    static const std::vector<std::string> h = {"beta", "h",          "N",      "replicas", "mean",     "stderr",
                                               "lo",   "hi",         "annealed_N", "pure_N", "annealed", "pure"};
    return h;
}

const std::vector<std::string>& curve_csv_header() {
    static const std::vector<std::string> h = {"beta", "h", "N", "replicas", "value", "stderr", "lo", "hi"};
    return h;
}

InterArrivalLaw build_law(const ExperimentConfig& cfg, std::size_t needed_N) {
    KernelSpec spec = cfg.kernel;
    if (spec.n_max == 0) {
        if (const auto* s = std::get_if<Stretched>(&spec.family)) {
            if (!(s->zeta > 0.0 && s->zeta < 1.0)) return build_kernel(spec);  // reports the range error
            spec.n_max = std::max({minimal_horizon(s->zeta, spec.tail_tolerance), needed_N, 2 * cfg.n_range});
        } else if (std::holds_alternative<Custom>(spec.family)) {
            spec.n_max = needed_N;
        }
    }
    return build_kernel(spec);
}

CommandResult cmd_validate_kernel(const ExperimentConfig& cfg) {
    const auto law = build_law(cfg, 0);
    CompensatedSum total;
    for (double m : law.mass_table()) total.add(m);
    total.add(law.truncated_tail_mass());
    const double normalization_error = std::abs(total.value() - 1.0);

    double shape_error = 0.0;
    if (const auto z = law.zeta()) {
        for (std::size_t n = 1; n <= law.n_max(); ++n)
            shape_error = std::max(shape_error, std::abs(law.log_mass(n) + std::pow(static_cast<double>(n), *z) +
                                                         law.log_norm()));
    }
    const auto lc = check_log_convexity(law);

    json warnings = json::array();
    bool pass = normalization_error <= 1e-12 && shape_error <= 1e-12;
    if (law.zeta() && !lc.holds) pass = false;  // the stretched family is always log-convex
    if (!lc.applicable)
        warnings.push_back("log-convexity not applicable: " + lc.note);
    else if (!lc.holds)
        warnings.push_back("kernel is not log-convex; FKG-based results (contact-fraction bound) do not apply");
    if (!std::isfinite(law.mean_gap())) warnings.push_back("mean gap is infinite");

    CommandResult r;
    r.result = {{"law", to_json(law)},
                {"mean_gap", std::isfinite(law.mean_gap()) ? json(law.mean_gap()) : json(nullptr)},
                {"normalization_error", normalization_error},
                {"shape_error", shape_error},
                {"log_convexity", to_json(lc)},
                {"warnings", warnings},
                {"pass", pass}};
    r.exit_code = pass ? 0 : 1;
    return r;
}

CommandResult cmd_free_energy(const ExperimentConfig& cfg) {
    const auto law = build_law(cfg, max_N(cfg));
    std::optional<DoublingConstant> doubling;
    if (law.zeta()) doubling = doubling_for(law, cfg);

    CommandResult r;
    CsvTable table(free_energy_csv_header());
    json rows = json::array();
    for (double beta : cfg.beta) {
        const double lambda = log_mgf(cfg.disorder, beta);
        for (double h : cfg.h) {
            const double pure = pure_free_energy(law, h);
            const double annealed = pure_free_energy(law, h + lambda);
            for (std::size_t N : cfg.N) {
                const auto envs = sample_replicas(cfg.disorder, N, cfg.master_seed, cfg.replicas, cfg.threads);
                const auto est = quenched_free_energy_estimate(law, cfg.disorder, {beta, h}, N, envs,
                                                               doubling ? &*doubling : nullptr, cfg.threads);
                const double pure_N = pure_finite_volume(law, h, N);
                const double annealed_N = pure_finite_volume(law, h + lambda, N);
                json row = to_json(est);
                row["annealed_N"] = annealed_N;
                row["pure_N"] = pure_N;
                row["annealed"] = annealed;
                row["pure"] = pure;
                const auto corr = bracket_correction(cfg.disorder, {beta, h});
                row["bracket_correction"] = {{"stated", corr.stated}, {"derived", corr.derived}, {"used", corr.used()}};
                rows.push_back(row);
                table.add_row({str(beta), str(h), str(N), str(est.replicas), str(est.mean_per_site),
                               str(est.std_error), str(est.bracket_lo), str(est.bracket_hi), str(annealed_N),
                               str(pure_N), str(annealed), str(pure)});
            }
        }
    }
    r.result = {{"law", to_json(law)}, {"rows", rows}};
    r.result["doubling_constant"] = doubling ? to_json(*doubling) : json(nullptr);
    r.table = std::move(table);
    return r;
}

CommandResult cmd_critical(const ExperimentConfig& cfg) {
    if (!cfg.h_window)
        throw ValidationError("critical: config key 'h_window' is required (e.g. --set h_window=-1,1)");
    const auto law = build_law(cfg, max_N(cfg));
    json records = json::array();
    for (double beta : cfg.beta) {
        for (std::size_t N : cfg.N) {
            const auto gap = relevance_gap(law, cfg.disorder, beta, critical_config(cfg, N));
            json rec = to_json(gap.estimate);
            rec["N"] = N;
            rec["replicas"] = cfg.replicas;
            rec["relevance_gap"] = {{"value", gap.value}, {"uncertainty", gap.uncertainty}};
            records.push_back(rec);
        }
    }
    CommandResult r;
    r.result = {{"law", to_json(law)}, {"records", records}};
    return r;
}

CommandResult cmd_exponent(const ExperimentConfig& cfg) {
    const auto law = build_law(cfg, max_N(cfg));
    const auto zeta = law.zeta();
    if (!zeta) throw NotApplicable("exponent: the admissible band is defined for stretched kernels only");
    const auto u_grid = log_grid(cfg.u_min, cfg.u_max, cfg.u_points);
    const std::size_t N = cfg.N.front();
    const double beta = cfg.beta.front();

    std::vector<CurvePoint> curve;
    CsvTable table(curve_csv_header());
    double reference = 0.0;
    json critical = nullptr;

    if (cfg.exponent_mode == "synthetic") {
        for (double u : u_grid) {
            const double f = std::pow(u, cfg.synthetic_nu);
            curve.push_back({u, f, f, f});
            table.add_row({str(beta), str(u), str(N), "0", str(f), "0", str(f), str(f)});
        }
    } else if (cfg.exponent_mode == "pure") {
        for (double u : u_grid) {
            const double f = pure_free_energy(law, u);
            curve.push_back({u, f, f, f});
            table.add_row({"0", str(u), "inf", "0", str(f), "0", str(f), str(f)});
        }
    } else {
        if (cfg.h_c) {
            reference = *cfg.h_c;
        } else {
            const auto est = estimate_critical_point(law, cfg.disorder, beta, critical_config(cfg, N));
            reference = 0.5 * (est.h_lo + est.h_hi);
            critical = to_json(est);
        }
        const auto envs = sample_replicas(cfg.disorder, N, cfg.master_seed, cfg.replicas, cfg.threads);
        const auto doubling = doubling_for(law, cfg);
        for (double u : u_grid) {
            const double h = reference + u;
            const auto est =
                quenched_free_energy_estimate(law, cfg.disorder, {beta, h}, N, envs, &doubling, cfg.threads);
            const double upper = std::min(est.bracket_hi, annealed_free_energy(law, cfg.disorder, beta, h));
            const double f_lo = est.mean_per_site - cfg.sigma_multiplier * est.std_error;
            curve.push_back({u, est.mean_per_site, f_lo, upper});
            table.add_row({str(beta), str(h), str(N), str(est.replicas), str(est.mean_per_site), str(est.std_error),
                           str(f_lo), str(upper)});
        }
    }

    const auto fit = fit_smoothing_exponent(curve, *zeta);
    json jc = json::array();
    for (const auto& p : curve) jc.push_back(to_json(p));
    CommandResult r;
    r.result = {{"mode", cfg.exponent_mode}, {"beta", beta},   {"h_c_reference", reference},
                {"curve", jc},               {"fit", to_json(fit)}, {"critical", critical}};
    r.csv_notes = {"fit: nu_hat = " + str(fit.nu_hat) + ", r_squared = " + str(fit.r_squared) + ", band = [" +
                       str(fit.band_lo) + ", " + str(fit.band_hi) + "], in_band = " + (fit.in_band ? "true" : "false"),
                   "h_c_reference: " + str(reference)};
    r.table = std::move(table);
    return r;
}

CommandResult cmd_fkg(const ExperimentConfig& cfg) {
    const std::size_t cap = std::min(cfg.brute_force_cap, fkg_cap);
    const std::size_t N = cfg.N.front();
    if (N > cap) {
        std::ostringstream os;
        os << "fkg: N=" << N << " exceeds the enumeration cap " << cap
           << "; the exact measure has 2^(N-1) atoms, use N <= " << cap << " (hard limit " << fkg_cap << ")";
        throw ValidationError(os.str());
    }
    const auto law = build_law(cfg, N);
    json reports = json::array();
    bool all_positive = true;
    for (double beta : cfg.beta) {
        for (double h : cfg.h) {
            for (std::size_t e = 0; e < cfg.environments; ++e) {
                const std::uint64_t env_seed = derive_seed(cfg.master_seed, e);
                const auto env = sample_environment(cfg.disorder, N, env_seed);
                const auto rep = fkg_brute_force_test(law, env.values(), {beta, h}, N, {}, cfg.lattice_pairs,
                                                      derive_seed(env_seed, 0));
                json j = to_json(rep);
                j["beta"] = beta;
                j["h"] = h;
                j["environment_seed"] = env_seed;
                all_positive = all_positive && rep.positive();
                reports.push_back(j);
            }
        }
    }
    CommandResult r;
    r.result = {{"law", to_json(law)}, {"seed", cfg.master_seed}, {"reports", reports}, {"all_positive", all_positive}};
    return r;
}

CommandResult cmd_rare_region(const ExperimentConfig& cfg) {
    const double M = cfg.u * std::exp(0.5 * cfg.u * cfg.u);
    std::size_t max_blocks = cfg.max_blocks;
    if (max_blocks == 0) {
        if (!(M < 1e9)) throw ValidationError("rare-region: M is too large for an automatic block budget; set max_blocks");
        max_blocks = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(M)));
    }
    const auto summary =
        rare_region_frequency(cfg.disorder, cfg.n_block, cfg.u, max_blocks, cfg.trials, cfg.master_seed, cfg.threads);
    const auto first = rare_region_scan(cfg.disorder, cfg.n_block, cfg.u, max_blocks, derive_seed(cfg.master_seed, 0));
    CommandResult r;
    r.result = {{"seed", cfg.master_seed},
                {"n_block", cfg.n_block},
                {"u", cfg.u},
                {"max_blocks", max_blocks},
                {"summary", to_json(summary)},
                {"first_trial", to_json(first)},
                {"gaussian_tail_reference", 0.5 * std::erfc(cfg.u / std::numbers::sqrt2)}};
    return r;
}

}  // namespace pinning::cli
