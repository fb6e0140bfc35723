#include "pinning/disorder.hpp"

#include <cmath>
#include <numbers>

#include "pinning/error.hpp"
#include "pinning/parallel.hpp"
#include "pinning/random.hpp"

namespace pinning {

std::string to_string(DisorderLaw law) {
    switch (law) {
        case DisorderLaw::Gaussian: return "gaussian";
        case DisorderLaw::Rademacher: return "rademacher";
        case DisorderLaw::UniformSym: return "uniform";
    }
    return "unknown";
}

DisorderLaw parse_disorder_law(const std::string& name) {
    if (name == "gaussian") return DisorderLaw::Gaussian;
    if (name == "rademacher") return DisorderLaw::Rademacher;
    if (name == "uniform") return DisorderLaw::UniformSym;
    throw ValidationError("unknown disorder law '" + name + "' (expected gaussian|rademacher|uniform)");
}

double draw(DisorderLaw law, Rng& rng) {
    switch (law) {
        case DisorderLaw::Gaussian: return rng.gaussian();
        case DisorderLaw::Rademacher: return (rng.bits() >> 63) ? 1.0 : -1.0;
        case DisorderLaw::UniformSym: return std::numbers::sqrt3 * (2.0 * rng.uniform() - 1.0);
    }
    return 0.0;
}

Environment sample_environment(DisorderLaw law, std::size_t N, std::uint64_t seed) {
    if (N == 0) throw ValidationError("sample_environment: N must be at least 1");
    Rng rng(seed);
    std::vector<double> values(N);
    for (auto& v : values) v = draw(law, rng);
    return Environment(law, seed, std::move(values));
}

std::vector<Environment> sample_replicas(DisorderLaw law, std::size_t N, std::uint64_t master_seed,
                                         std::size_t replicas, unsigned threads) {
    return parallel_map(replicas, threads, [&](std::size_t k) {
        return sample_environment(law, N, derive_seed(master_seed, k));
    });
}

double log_mgf(DisorderLaw law, double beta) {
    switch (law) {
        case DisorderLaw::Gaussian: return 0.5 * beta * beta;
        case DisorderLaw::Rademacher: {
            const double b = std::abs(beta);
            return b + std::log1p(std::exp(-2.0 * b)) - std::numbers::ln2;
        }
        case DisorderLaw::UniformSym: {
            const double x = std::numbers::sqrt3 * std::abs(beta);
            if (x < 1e-4) return x * x / 6.0 - std::pow(x, 4) / 180.0;
            // log(sinh x / x) = x - log(2x) + log1p(-e^{-2x})
            return x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
        }
    }
    return 0.0;
}

Environment tilt(const Environment& env, double delta) {
    std::vector<double> values(env.values().begin(), env.values().end());
    for (auto& v : values) v += delta;
    return Environment(env.law(), env.seed(), std::move(values));
}

}  // namespace pinning
