#include "pinning/polymer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "pinning/error.hpp"
#include "pinning/logspace.hpp"

namespace pinning {

namespace {

void require_valid(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N, const char* what) {
    std::ostringstream os;
    if (N == 0) {
        os << what << ": N must be at least 1";
    } else if (N > law.n_max() && !law.exact_beyond_table()) {
        os << what << ": N=" << N << " exceeds kernel table n_max=" << law.n_max();
    } else if (omega.size() < N) {
        os << what << ": environment has " << omega.size() << " sites, need " << N;
    } else if (!(params.beta >= 0.0)) {
        os << what << ": beta must be non-negative";
    } else {
        return;
    }
    throw ValidationError(os.str());
}

inline double site_energy(Omega omega, PolymerParams params, std::size_t n) {
    return params.beta * omega[n - 1] + params.h;
}

}  // namespace

std::vector<double> forward_log_table(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N) {
    require_valid(law, omega, params, N, "log_partition");
    const auto lk = law.log_mass_table();
    std::vector<double> L(N + 1, neg_inf);
    L[0] = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        LogSumExp acc;
        for (std::size_t k = 1; k <= std::min(n, law.n_max()); ++k) acc.add(lk[k] + L[n - k]);
        L[n] = site_energy(omega, params, n) + acc.value();
    }
    return L;
}

double log_partition(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N) {
    return forward_log_table(law, omega, params, N)[N];
}

double log_path_weight(const InterArrivalLaw& law, Omega omega, PolymerParams params, Subset s, std::size_t N) {
    double w = 0.0;
    std::size_t prev = 0;
    while (s != 0) {
        const std::size_t n = static_cast<std::size_t>(std::countr_zero(s)) + 1;
        s &= s - 1;
        w += law.log_mass(n - prev) + site_energy(omega, params, n);
        prev = n;
    }
    if (prev != N) return neg_inf;
    return w;
}

double brute_force_log_partition(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N) {
    require_valid(law, omega, params, N, "brute_force_log_partition");
    if (N > brute_force_cap) {
        std::ostringstream os;
        os << "brute_force_log_partition: N=" << N << " above enumeration cap " << brute_force_cap;
        throw ValidationError(os.str());
    }
    const Subset endpoint = Subset{1} << (N - 1);
    LogSumExp acc;
    for (Subset inner = 0; inner < endpoint; ++inner) acc.add(log_path_weight(law, omega, params, inner | endpoint, N));
    return acc.value();
}

double log_partition_segment(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t a,
                             std::size_t b) {
    if (a > b) throw ValidationError("log_partition_segment: a must not exceed b");
    if (b > omega.size()) throw ValidationError("log_partition_segment: b beyond environment length");
    const double start = a > 0 ? site_energy(omega, params, a) : 0.0;
    if (a == b) return start;
    return start + log_partition(law, omega.subspan(a), params, b - a);
}

PartitionComputation contact_profile(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N) {
    const auto L = forward_log_table(law, omega, params, N);
    if (L[N] == neg_inf) throw ValidationError("contact_profile: endpoint N is unreachable under this kernel");
    const auto lk = law.log_mass_table();

    // Backward table: W[n] = log of the weight of (n, N] given a contact at n,
    // counting site energies strictly after n.
    std::vector<double> W(N + 1, neg_inf);
    W[N] = 0.0;
    for (std::size_t n = N; n-- > 0;) {
        LogSumExp acc;
        for (std::size_t k = 1; k <= std::min(N - n, law.n_max()); ++k) acc.add(lk[k] + site_energy(omega, params, n + k) + W[n + k]);
        W[n] = acc.value();
    }

    PartitionComputation out;
    out.log_z = L[N];
    out.contact_probabilities.assign(N + 1, 0.0);
    CompensatedSum total;
    for (std::size_t n = 0; n <= N; ++n) {
        const double p = (n == 0 || n == N) ? 1.0 : std::exp(L[n] + W[n] - L[N]);
        out.contact_probabilities[n] = p;
        if (n > 0) total.add(p);
    }
    out.expected_contacts = total.value();
    return out;
}

ContactCountWeights contact_count_logweights(const InterArrivalLaw& law, Omega omega, PolymerParams params,
                                             std::size_t N, std::size_t cap) {
    require_valid(law, omega, params, N, "contact_count_logweights");
    if (N > cap) {
        std::ostringstream os;
        os << "contact_count_logweights: N=" << N << " above cap " << cap
           << " (cost is O(N^3); raise the contact-count cap explicitly if intended)";
        throw ValidationError(os.str());
    }
    const auto lk = law.log_mass_table();
    const std::size_t stride = N + 1;
    std::vector<double> L(stride * stride, neg_inf);
    auto at = [&](std::size_t n, std::size_t m) -> double& { return L[n * stride + m]; };
    at(0, 0) = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        const double e = site_energy(omega, params, n);
        for (std::size_t m = 1; m <= n; ++m) {
            LogSumExp acc;
            // the previous contact sits at n-k and carries m-1 contacts, so n-k >= m-1
            for (std::size_t k = 1; k + (m - 1) <= n && k <= law.n_max(); ++k) acc.add(lk[k] + at(n - k, m - 1));
            at(n, m) = e + acc.value();
        }
    }
    ContactCountWeights out;
    out.N = N;
    out.log_w.assign(L.begin() + static_cast<std::ptrdiff_t>(N * stride), L.end());
    out.log_z = log_sum_exp(out.log_w);
    return out;
}

namespace {

std::size_t event_threshold(double eps, std::size_t N) {
    const double t = std::floor(eps * static_cast<double>(N));
    if (t < 0.0) return 0;
    return static_cast<std::size_t>(std::min(t, static_cast<double>(N)));
}

}  // namespace

double ContactCountWeights::log_z_low(double eps) const {
    const std::size_t t = event_threshold(eps, N);
    return log_sum_exp(std::span<const double>(log_w).subspan(0, t + 1));
}

double ContactCountWeights::log_z_high(double eps) const {
    const std::size_t t = event_threshold(eps, N);
    return log_sum_exp(std::span<const double>(log_w).subspan(t + 1));
}

double ContactCountWeights::probability_high(double eps) const { return std::exp(log_z_high(eps) - log_z); }

double PolymerMeasure::probability(Subset s) const {
    const Subset endpoint = Subset{1} << (N_ - 1);
    if ((s & endpoint) == 0 || (s >> N_) != 0) return 0.0;
    return probabilities_[s & (endpoint - 1)];
}

PolymerMeasure exact_polymer_measure(const InterArrivalLaw& law, Omega omega, PolymerParams params, std::size_t N) {
    require_valid(law, omega, params, N, "exact_polymer_measure");
    if (N > exact_measure_cap) {
        std::ostringstream os;
        os << "exact_polymer_measure: N=" << N << " above cap " << exact_measure_cap;
        throw ValidationError(os.str());
    }
    const Subset endpoint = Subset{1} << (N - 1);
    std::vector<double> lw(endpoint);
    LogSumExp acc;
    for (Subset inner = 0; inner < endpoint; ++inner) {
        lw[inner] = log_path_weight(law, omega, params, inner | endpoint, N);
        acc.add(lw[inner]);
    }
    const double log_z = acc.value();
    for (auto& w : lw) w = std::exp(w - log_z);
    return PolymerMeasure(N, std::move(lw));
}

}  // namespace pinning
