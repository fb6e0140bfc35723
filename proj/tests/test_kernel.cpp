#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "oracles.hpp"
#include "pinning/error.hpp"
#include "pinning/kernel.hpp"
#include "pinning/random.hpp"

using namespace pinning;

namespace {

InterArrivalLaw stretched(double zeta, double tol = 1e-14) {
    return build_kernel({Stretched{zeta}, 0, tol});
}

InterArrivalLaw custom(std::map<std::size_t, double> t) { return build_kernel({Custom{std::move(t)}}); }

}  // namespace

TEST_CASE("stretched masses follow exp(-sqrt n) over the direct normalizer") {
    const auto law = stretched(0.5);
    const long double direct =
        oracle::sum_until_negligible([](long double n) { return std::exp(-std::sqrt(n)); }, 1e-24L);
    CHECK(law.log_norm() == doctest::Approx(static_cast<double>(std::log(direct))).epsilon(1e-13));
    for (std::size_t n : {1u, 2u, 3u, 10u, 100u, 1000u}) {
        const double expected = -std::sqrt(static_cast<double>(n)) - static_cast<double>(std::log(direct));
        CHECK(law.log_mass(n) == doctest::Approx(expected).epsilon(1e-13));
    }
    const double ratio = std::exp(law.log_mass(2) - law.log_mass(1));
    CHECK(ratio == doctest::Approx(std::exp(1.0 - std::sqrt(2.0))).epsilon(1e-14));
}

TEST_CASE("point-mass custom law") {
    const auto law = custom({{1, 1.0}});
    CHECK(law.log_mass(1) == 0.0);
    CHECK(mean_gap(law) == 1.0);
    const auto u = renewal_mass_function(law, 5);
    for (double x : u) CHECK(x == doctest::Approx(1.0));
    CHECK(sample_renewal(law, 4, 99) == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("two-point custom laws") {
    CHECK(mean_gap(custom({{1, 0.5}, {3, 0.5}})) == doctest::Approx(2.0));
    const auto u = renewal_mass_function(custom({{1, 0.5}, {2, 0.5}}), 2);
    CHECK(u[0] == 1.0);
    CHECK(u[1] == doctest::Approx(0.5));
    CHECK(u[2] == doctest::Approx(0.75));
}

TEST_CASE("mean gap matches high-precision summation") {
    for (double zeta : {0.5, 0.75, 0.25}) {
        const auto law = stretched(zeta);
        const long double z = zeta;
        const auto w = [z](long double n) { return std::exp(-std::pow(n, z)); };
        const long double norm = oracle::sum_until_negligible(w, 1e-22L);
        const long double first = oracle::sum_until_negligible([&](long double n) { return n * w(n); }, 1e-22L);
        CAPTURE(zeta);
        CHECK(mean_gap(law) == doctest::Approx(static_cast<double>(first / norm)).epsilon(1e-11));
    }
}

TEST_CASE("normalization and shape hold for every built law") {
    for (double zeta : {0.25, 0.5, 0.75, 0.9}) {
        const auto law = stretched(zeta);
        long double total = law.truncated_tail_mass();
        for (std::size_t n = 1; n <= law.n_max(); ++n) total += law.mass_table()[n];
        CAPTURE(zeta);
        CHECK(std::fabs(static_cast<double>(total) - 1.0) <= 1e-12);
        double worst = 0.0;
        for (std::size_t n = 1; n <= law.n_max(); ++n)
            worst = std::max(worst, std::fabs(law.log_mass(n) + std::pow(static_cast<double>(n), zeta) + law.log_norm()));
        CHECK(worst <= 1e-12);
        CHECK(law.truncated_tail_mass() <= 1e-14);
    }
    const auto c = custom({{2, 3.0}, {5, 1.0}});
    CHECK(std::exp(c.log_mass(2)) + std::exp(c.log_mass(5)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.n_max() == 5);
    CHECK_FALSE(c.full_support());
}

TEST_CASE("invalid kernel specs are rejected") {
    CHECK_THROWS_AS(stretched(1.2), ValidationError);
    CHECK_THROWS_AS(stretched(0.0), ValidationError);
    CHECK_THROWS_AS(build_kernel({Stretched{0.5}, 100, 1e-14}), ValidationError);
    CHECK_THROWS_AS(custom({}), ValidationError);
    CHECK_THROWS_AS(custom({{1, -1.0}}), ValidationError);
    CHECK_THROWS_AS(renewal_mass_function(build_kernel({Stretched{0.75}}), 1u << 20), ValidationError);
    CHECK_NOTHROW(build_kernel({Stretched{0.5}, 5000, 1e-14}));
}

TEST_CASE("stretched laws are log-convex") {
    for (double zeta : {0.25, 0.5, 0.75, 0.9}) {
        CAPTURE(zeta);
        const auto r = check_log_convexity(stretched(zeta));
        CHECK(r.applicable);
        CHECK(r.holds);
        CHECK(r.worst_slack >= -log_convexity_tolerance);
    }
    // The 1e-14 budget would need a horizon around 10^20 at zeta = 0.1.
    CHECK_THROWS_AS(stretched(0.1), ValidationError);
    const auto r = check_log_convexity(build_kernel({Stretched{0.1}, 4000, 1.0}));
    CHECK(r.holds);
}

TEST_CASE("log-convexity slack at the (2,2) triple") {
    const auto law = stretched(0.5);
    const double slack = law.log_mass(3) + law.log_mass(1) - 2 * law.log_mass(2);
    CHECK(slack == doctest::Approx(2 * std::sqrt(2.0) - std::sqrt(3.0) - 1.0).epsilon(1e-12));
    CHECK(slack > 0);
}

TEST_CASE("non-log-convex three-point table") {
    const auto bad = check_log_convexity(custom({{1, 0.1}, {2, 0.8}, {3, 0.1}}));
    CHECK(bad.applicable);
    CHECK_FALSE(bad.holds);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->first == 2);
    CHECK(bad.witness->second == 2);
    CHECK(bad.worst_slack == doctest::Approx(std::log(0.01 / 0.64)));

    CHECK(check_log_convexity(custom({{1, 0.8}, {2, 0.1}, {3, 0.1}})).holds);
    const auto gapped = check_log_convexity(custom({{1, 0.5}, {3, 0.5}}));
    CHECK_FALSE(gapped.applicable);
    CHECK_FALSE(gapped.note.empty());
}

TEST_CASE("renewal mass function equals subset enumeration") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        std::map<std::size_t, double> table;
        const std::size_t support = 1 + rng.bits() % 8;
        for (std::size_t n = 1; n <= support; ++n)
            if (n == 1 || rng.uniform() < 0.7) table[n] = 0.05 + rng.uniform();
        auto law = build_kernel({Custom{table}, 12});
        std::vector<double> K(law.mass_table().begin(), law.mass_table().end());
        const auto u = renewal_mass_function(law, 12);
        CHECK(u[0] == 1.0);
        for (std::size_t n = 1; n <= 12; ++n) {
            const double ref = static_cast<double>(oracle::renewal_by_enumeration(K, n));
            CAPTURE(trial);
            CAPTURE(n);
            CHECK(std::fabs(u[n] - ref) <= 1e-12 * ref);
            CHECK(u[n] > 0.0);
            CHECK(u[n] <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("sampled gaps match the kernel histogram") {
    const auto law = stretched(0.5);
    const std::size_t target = 100000;
    std::vector<double> counts(12, 0.0);
    std::size_t gaps = 0;
    std::uint64_t seed = 7;
    while (gaps < target) {
        const auto pts = sample_renewal(law, 60000, seed++);
        for (std::size_t i = 1; i < pts.size() && gaps < target; ++i, ++gaps) {
            const std::size_t g = pts[i] - pts[i - 1];
            counts[g <= 10 ? g : 11] += 1.0;
        }
    }
    double tail = 1.0;
    for (std::size_t n = 1; n <= 11; ++n) {
        const double p = n <= 10 ? law.mass_table()[n] : tail;
        if (n <= 10) tail -= p;
        const double expected = p * target;
        const double se = std::sqrt(target * p * (1 - p));
        CAPTURE(n);
        CHECK(std::fabs(counts[n] - expected) <= 3.0 * se);
    }
}

TEST_CASE("sampling is deterministic per seed and starts at zero") {
    const auto law = stretched(0.75);
    const auto a = sample_renewal(law, 500, 3);
    CHECK(a == sample_renewal(law, 500, 3));
    CHECK(a.front() == 0);
    CHECK(a.back() <= 500);
    CHECK(a != sample_renewal(law, 500, 4));
}
