#include <doctest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pinning/disorder.hpp"
#include "pinning/error.hpp"
#include "pinning/kernel.hpp"
#include "pinning/logspace.hpp"
#include "pinning/polymer.hpp"
#include "pinning/random.hpp"

using namespace pinning;

namespace {

const InterArrivalLaw& law_for(double zeta) {
    static const auto a = build_kernel({Stretched{0.25}});
    static const auto b = build_kernel({Stretched{0.5}, 2048});
    static const auto c = build_kernel({Stretched{0.75}, 1024});
    return zeta == 0.25 ? a : zeta == 0.5 ? b : c;
}

std::vector<double> masses(const InterArrivalLaw& law, std::size_t upto) {
    std::vector<double> K(upto + 1, 0.0);
    for (std::size_t n = 1; n <= upto; ++n) K[n] = std::exp(law.log_mass(n));
    return K;
}

}  // namespace

TEST_CASE("log partition matches linear-space enumeration") {
    Rng rng(1);
    int instances = 0;
    for (double zeta : {0.25, 0.5, 0.75})
        for (double beta : {0.0, 0.5, 2.0})
            for (double h : {-1.0, 0.0, 1.0})
                for (int rep = 0; rep < 4; ++rep) {
                    const auto& law = law_for(zeta);
                    const std::size_t N = 3 + rng.bits() % 10;
                    const auto env = sample_environment(DisorderLaw::Gaussian, N, rng.bits());
                    const std::vector<double> w(env.values().begin(), env.values().end());
                    const double ref =
                        static_cast<double>(std::log(oracle::partition_by_enumeration(masses(law, N), w, beta, h, N)));
                    const double dp = log_partition(law, env.values(), {beta, h}, N);
                    const double bf = brute_force_log_partition(law, env.values(), {beta, h}, N);
                    CHECK(std::fabs(dp - ref) <= 1e-10 * std::max(1.0, std::fabs(ref)));
                    CHECK(std::fabs(bf - ref) <= 1e-10 * std::max(1.0, std::fabs(ref)));
                    ++instances;
                }
    CHECK(instances >= 100);
}

TEST_CASE("small-N closed forms") {
    const auto& law = law_for(0.5);
    const std::vector<double> w{0.3, -1.2};
    CHECK(log_partition(law, w, {0.7, 0.4}, 1) == doctest::Approx(law.log_mass(1) + 0.7 * 0.3 + 0.4));
    CHECK(brute_force_log_partition(law, w, {0.7, 0.4}, 1) == log_partition(law, w, {0.7, 0.4}, 1));

    const double q = 0.3, beta = 0.8, h = -0.2;
    const auto two = build_kernel({Custom{{{1, q}, {2, 1 - q}}}});
    const double expected =
        std::log((1 - q) * std::exp(beta * w[1] + h) + q * q * std::exp(beta * (w[0] + w[1]) + 2 * h));
    CHECK(brute_force_log_partition(two, w, {beta, h}, 2) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(log_partition(two, w, {beta, h}, 2) == doctest::Approx(expected).epsilon(1e-14));

    const auto m = exact_polymer_measure(two, w, {beta, h}, 2);
    REQUIRE(m.size() == 2);
    const double odds = (1 - q) * std::exp(beta * w[1] + h) / (q * q * std::exp(beta * (w[0] + w[1]) + 2 * h));
    CHECK(m.probability(0b10) / m.probability(0b11) == doctest::Approx(odds));
    CHECK(m.probability(0b01) == 0.0);
}

TEST_CASE("zero field reduces to the renewal mass function") {
    for (double zeta : {0.25, 0.5, 0.75}) {
        const auto& law = law_for(zeta);
        const std::vector<double> w(300, 0.0);
        const auto u = renewal_mass_function(law, 300);
        for (std::size_t N : {1u, 2u, 17u, 300u})
            CHECK(log_partition(law, w, {0, 0}, N) == doctest::Approx(std::log(u[N])).epsilon(1e-12));
    }
}

TEST_CASE("segments follow the start-point convention") {
    const auto& law = law_for(0.5);
    const auto env = sample_environment(DisorderLaw::Gaussian, 40, 3);
    const PolymerParams p{1.1, 0.2};
    CHECK(log_partition_segment(law, env.values(), p, 0, 0) == 0.0);
    CHECK(log_partition_segment(law, env.values(), p, 0, 25) == log_partition(law, env.values(), p, 25));
    const std::vector<double> shifted(env.values().begin() + 10, env.values().end());
    CHECK(log_partition_segment(law, env.values(), p, 10, 40) ==
          doctest::Approx(p.beta * env.omega(10) + p.h + log_partition(law, shifted, p, 30)).epsilon(1e-14));
    CHECK(log_partition_segment(law, env.values(), p, 7, 7) == doctest::Approx(p.beta * env.omega(7) + p.h));
    CHECK_THROWS_AS(log_partition_segment(law, env.values(), p, 8, 7), ValidationError);
}

TEST_CASE("contact marginals agree with the exact measure") {
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const auto& law = law_for(trial % 2 ? 0.5 : 0.75);
        const std::size_t N = 2 + rng.bits() % 9;
        const auto env = sample_environment(DisorderLaw::Gaussian, N, rng.bits());
        const PolymerParams p{2.0 * rng.uniform(), -1.0 + 2.0 * rng.uniform()};
        const auto prof = contact_profile(law, env.values(), p, N);
        const auto m = exact_polymer_measure(law, env.values(), p, N);
        double total = 0;
        for (std::size_t i = 0; i < m.size(); ++i) total += m.probability_at(i);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(prof.log_z == doctest::Approx(log_partition(law, env.values(), p, N)).epsilon(1e-13));
        double sum = 0;
        for (std::size_t n = 1; n <= N; ++n) {
            const double marg = m.expectation([n](Subset s) { return double(s >> (n - 1) & 1u); });
            CHECK(std::fabs(prof.contact_probabilities[n] - marg) <= 1e-10);
            CHECK(prof.contact_probabilities[n] >= 0.0);
            CHECK(prof.contact_probabilities[n] <= 1.0 + 1e-12);
            sum += prof.contact_probabilities[n];
        }
        CHECK(prof.contact_probabilities[N] == 1.0);
        CHECK(prof.expected_contacts == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("forced and saturated occupation") {
    const auto unit = build_kernel({Custom{{{1, 1.0}}}});
    const auto env = sample_environment(DisorderLaw::Gaussian, 30, 8);
    const auto prof = contact_profile(unit, env.values(), {1.0, 0.0}, 30);
    for (std::size_t n = 0; n <= 30; ++n) CHECK(prof.contact_probabilities[n] == doctest::Approx(1.0));
    const auto cw = contact_count_logweights(unit, env.values(), {1.0, 0.0}, 30);
    for (std::size_t m = 0; m < 30; ++m) CHECK(cw.log_w[m] == neg_inf);
    CHECK(std::isfinite(cw.log_w[30]));

    const std::vector<double> zero(200, 0.0);
    const auto sat = contact_profile(law_for(0.5), zero, {0.0, 50.0}, 200);
    CHECK(sat.expected_contacts >= 200.0 * (1.0 - std::exp(-10.0)));
}

TEST_CASE("contact counts") {
    Rng rng(13);
    for (int trial = 0; trial < 15; ++trial) {
        const auto& law = law_for(0.5);
        const std::size_t N = 2 + rng.bits() % 9;
        const auto env = sample_environment(DisorderLaw::Rademacher, N, rng.bits());
        const PolymerParams p{1.5 * rng.uniform(), -1.0 + 2.0 * rng.uniform()};
        const auto cw = contact_count_logweights(law, env.values(), p, N);
        CHECK(cw.log_z == doctest::Approx(log_partition(law, env.values(), p, N)).epsilon(1e-12));
        CHECK(log_sum_exp(cw.log_w) == doctest::Approx(cw.log_z).epsilon(1e-12));

        std::vector<long double> weights;
        const std::vector<double> w(env.values().begin(), env.values().end());
        oracle::partition_by_enumeration(masses(law, N), w, p.beta, p.h, N, &weights);
        std::vector<long double> by_count(N + 1, 0.0L);
        const Subset endpoint = Subset{1} << (N - 1);
        for (Subset inner = 0; inner < endpoint; ++inner) by_count[std::popcount(inner | endpoint)] += weights[inner];
        for (std::size_t m = 1; m <= N; ++m)
            CHECK(std::exp(cw.log_w[m]) == doctest::Approx(static_cast<double>(by_count[m])).epsilon(1e-10));

        for (double eps : {0.0, 0.2, 0.5, 0.99, 1.0}) {
            const double lo = cw.log_z_low(eps), hi = cw.log_z_high(eps);
            CHECK(log_add(lo, hi) == doctest::Approx(cw.log_z).epsilon(1e-12));
            const auto cut = static_cast<std::size_t>(std::floor(eps * N));
            long double low = 0;
            for (std::size_t m = 1; m <= cut && m <= N; ++m) low += by_count[m];
            if (low > 0) CHECK(std::exp(lo) == doctest::Approx(static_cast<double>(low)).epsilon(1e-10));
            CHECK(cw.probability_high(eps) == doctest::Approx(std::exp(hi - cw.log_z)));
        }
    }
    const std::vector<double> w(600, 0.0);
    CHECK_THROWS_AS(contact_count_logweights(law_for(0.5), w, {}, 600), ValidationError);
    CHECK_NOTHROW(contact_count_logweights(law_for(0.5), w, {}, 40, 40));
}

TEST_CASE("pathwise superadditivity") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto& law = law_for(trial % 3 == 0 ? 0.25 : trial % 3 == 1 ? 0.5 : 0.75);
        const std::size_t N = 1 + rng.bits() % 256, M = 1 + rng.bits() % 256;
        const auto env = sample_environment(DisorderLaw::Gaussian, N + M, rng.bits());
        const PolymerParams p{2.0 * rng.uniform(), -1.0 + 2.0 * rng.uniform()};
        const double whole = log_partition(law, env.values(), p, N + M);
        const double split = log_partition(law, env.values(), p, N) +
                             log_partition(law, env.values().subspan(N), p, M);
        CHECK(whole - split >= -1e-10);
    }
}

TEST_CASE("log partition is increasing and convex in h") {
    const auto& law = law_for(0.5);
    const auto env = sample_environment(DisorderLaw::Gaussian, 120, 4);
    const double step = 0.05;
    for (double h = -2.0; h <= 2.0; h += 0.1) {
        const PolymerParams a{1.0, h - step}, b{1.0, h}, c{1.0, h + step};
        const double za = log_partition(law, env.values(), a, 120);
        const double zb = log_partition(law, env.values(), b, 120);
        const double zc = log_partition(law, env.values(), c, 120);
        CHECK(zc > zb);
        CHECK(za - 2 * zb + zc >= -1e-8);
    }
}

TEST_CASE("h-derivative equals expected contacts") {
    const auto& law = law_for(0.75);
    for (std::size_t N : {10u, 64u, 200u}) {
        const auto env = sample_environment(DisorderLaw::Gaussian, N, N);
        for (double h : {-0.5, 0.0, 0.7}) {
            const double d = 1e-4;
            const double fd = (log_partition(law, env.values(), {0.8, h + d}, N) -
                               log_partition(law, env.values(), {0.8, h - d}, N)) /
                              (2 * d);
            const double ec = contact_profile(law, env.values(), {0.8, h}, N).expected_contacts;
            CHECK(std::fabs(fd - ec) <= 1e-4 * N);
        }
    }
}

TEST_CASE("size and input guards") {
    const auto& law = law_for(0.5);
    const std::vector<double> w(30, 0.0);
    CHECK_THROWS_AS(brute_force_log_partition(law, w, {}, 21), ValidationError);
    CHECK_THROWS_AS(exact_polymer_measure(law, w, {}, 15), ValidationError);
    CHECK_THROWS_AS(log_partition(law, w, {}, 31), ValidationError);
    CHECK_THROWS_AS(log_partition(law, w, {}, 0), ValidationError);
    CHECK_THROWS_AS(log_partition(law, w, {-1.0, 0.0}, 5), ValidationError);
    const auto small = build_kernel({Stretched{0.75}, 0, 1e-14});
    const std::vector<double> big(small.n_max() + 1, 0.0);
    CHECK_THROWS_AS(log_partition(small, big, {}, small.n_max() + 1), ValidationError);
}
