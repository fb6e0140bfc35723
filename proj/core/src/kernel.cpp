#include "pinning/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "pinning/error.hpp"
#include "pinning/logspace.hpp"
#include "pinning/random.hpp"

namespace pinning {

namespace {

constexpr std::size_t horizon_cap = std::size_t{1} << 25;

// int_M^inf e^{-x^zeta} dx
double stretched_tail_integral(double zeta, double M) {
    return boost::math::tgamma(1.0 / zeta, std::pow(M, zeta)) / zeta;
}

// int_M^inf x e^{-x^zeta} dx
double stretched_tail_first_moment(double zeta, double M) {
    return boost::math::tgamma(2.0 / zeta, std::pow(M, zeta)) / zeta;
}

double stretched_tail_fraction_bound(double zeta, std::size_t M) {
    // sum_{n>=1} e^{-n^zeta} >= int_1^inf e^{-x^zeta} dx, so this over-estimates
    // the normalized tail.
    return stretched_tail_integral(zeta, static_cast<double>(M)) / stretched_tail_integral(zeta, 1.0);
}

void validate(const KernelSpec& spec) {
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Stretched>) {
                if (!(fam.zeta > 0.0 && fam.zeta < 1.0)) {
                    std::ostringstream os;
                    os << "stretched kernel requires zeta in (0,1), got " << fam.zeta;
                    throw ValidationError(os.str());
                }
            } else if constexpr (std::is_same_v<T, PowerLaw>) {
                if (!(fam.alpha > 0.0)) {
                    std::ostringstream os;
                    os << "power-law kernel requires alpha > 0, got " << fam.alpha;
                    throw ValidationError(os.str());
                }
            } else {
                if (fam.table.empty()) throw ValidationError("custom kernel table is empty");
                for (auto [gap, mass] : fam.table) {
                    if (gap == 0) throw ValidationError("custom kernel gaps must be positive integers");
                    if (!(mass > 0.0) || !std::isfinite(mass))
                        throw ValidationError("custom kernel masses must be strictly positive and finite");
                }
            }
        },
        spec.family);
    if (!(spec.tail_tolerance > 0.0)) throw ValidationError("tail_tolerance must be positive");
}

}  // namespace

std::string family_name(const KernelFamily& family) {
    switch (family.index()) {
        case 0: return "stretched";
        case 1: return "powerlaw";
        default: return "custom";
    }
}

double InterArrivalLaw::log_mass(std::size_t n) const {
    if (n == 0 || n >= log_mass_.size()) return neg_inf;
    return log_mass_[n];
}

std::optional<double> InterArrivalLaw::zeta() const {
    if (const auto* s = std::get_if<Stretched>(&spec_.family)) return s->zeta;
    return std::nullopt;
}

std::size_t InterArrivalLaw::quantile(double u) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::size_t>(it - cdf_.begin());
}

std::size_t minimal_horizon(double zeta, double tolerance) {
    if (!(zeta > 0.0 && zeta < 1.0)) throw ValidationError("minimal_horizon requires zeta in (0,1)");
    std::size_t hi = 2;
    while (stretched_tail_fraction_bound(zeta, hi) > tolerance) {
        if (hi >= horizon_cap) {
            std::ostringstream os;
            os << "tail tolerance " << tolerance << " unreachable for zeta=" << zeta << " within a table of "
               << horizon_cap << " entries; raise tail_tolerance";
            throw ValidationError(os.str());
        }
        hi = std::min(hi * 2, horizon_cap);
    }
    std::size_t lo = hi / 2;  // bound fails at lo (or lo is trivially small)
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (stretched_tail_fraction_bound(zeta, mid) > tolerance)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

InterArrivalLaw build_kernel(const KernelSpec& spec) {
    validate(spec);
    InterArrivalLaw law;
    law.spec_ = spec;

    std::size_t n_max = spec.n_max;
    std::vector<double> raw_log;  // unnormalized log weights, index 0 unused
    double tail_weight = 0.0;
    double tail_first_moment = 0.0;

    if (const auto* s = std::get_if<Stretched>(&spec.family)) {
        if (n_max == 0) n_max = minimal_horizon(s->zeta, spec.tail_tolerance);
        if (n_max > horizon_cap) throw ValidationError("n_max exceeds the supported table size");
        raw_log.assign(n_max + 1, neg_inf);
        for (std::size_t n = 1; n <= n_max; ++n) raw_log[n] = -std::pow(static_cast<double>(n), s->zeta);
        tail_weight = stretched_tail_integral(s->zeta, static_cast<double>(n_max));
        tail_first_moment = stretched_tail_first_moment(s->zeta, static_cast<double>(n_max));
    } else if (const auto* p = std::get_if<PowerLaw>(&spec.family)) {
        if (n_max == 0) throw ValidationError("power-law kernel needs an explicit n_max");
        if (n_max > horizon_cap) throw ValidationError("n_max exceeds the supported table size");
        raw_log.assign(n_max + 1, neg_inf);
        for (std::size_t n = 1; n <= n_max; ++n)
            raw_log[n] = -(1.0 + p->alpha) * std::log(static_cast<double>(n));
        const double M = static_cast<double>(n_max);
        tail_weight = std::pow(M, -p->alpha) / p->alpha;
        tail_first_moment = p->alpha > 1.0 ? std::pow(M, 1.0 - p->alpha) / (p->alpha - 1.0)
                                           : std::numeric_limits<double>::infinity();
    } else {
        const auto& table = std::get<Custom>(spec.family).table;
        n_max = std::max(n_max, table.rbegin()->first);
        if (n_max > horizon_cap) throw ValidationError("n_max exceeds the supported table size");
        raw_log.assign(n_max + 1, neg_inf);
        for (auto [gap, mass] : table) raw_log[gap] = std::log(mass);
    }

    CompensatedSum finite;
    for (std::size_t n = 1; n <= n_max; ++n)
        if (raw_log[n] != neg_inf) finite.add(std::exp(raw_log[n]));
    const double total = finite.value() + tail_weight;
    law.log_norm_ = std::log(total);
    law.truncated_tail_mass_ = tail_weight / total;

    if (law.truncated_tail_mass_ > spec.tail_tolerance) {
        std::ostringstream os;
        os << "n_max=" << n_max << " leaves truncated mass " << law.truncated_tail_mass_
           << " above tail_tolerance " << spec.tail_tolerance;
        if (const auto* s = std::get_if<Stretched>(&spec.family)) {
            try {
                os << "; need n_max >= " << minimal_horizon(s->zeta, spec.tail_tolerance);
            } catch (const ValidationError&) {
                os << "; the tolerance is unreachable, raise tail_tolerance";
            }
        }
        throw ValidationError(os.str());
    }

    law.log_mass_.assign(n_max + 1, neg_inf);
    law.mass_.assign(n_max + 1, 0.0);
    law.cdf_.assign(n_max + 1, 0.0);
    CompensatedSum moment;
    CompensatedSum running;
    law.full_support_ = true;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (raw_log[n] == neg_inf) {
            law.full_support_ = false;
        } else {
            law.log_mass_[n] = raw_log[n] - law.log_norm_;
            law.mass_[n] = std::exp(law.log_mass_[n]);
            moment.add(static_cast<double>(n) * law.mass_[n]);
            running.add(law.mass_[n]);
        }
        law.cdf_[n] = running.value();
    }
    const double table_mass = running.value();
    for (auto& c : law.cdf_) c /= table_mass;
    law.cdf_.back() = 1.0;

    law.mean_gap_ = moment.value() + tail_first_moment / total;
    return law;
}

double mean_gap(const InterArrivalLaw& law) { return law.mean_gap(); }

LogConvexityReport check_log_convexity(const InterArrivalLaw& law) {
    LogConvexityReport report;
    if (!law.full_support()) {
        report.applicable = false;
        report.holds = false;
        report.worst_slack = std::numeric_limits<double>::quiet_NaN();
        report.note = "not applicable: support of K has gaps in 1..n_max";
        return report;
    }
    const auto lk = law.log_mass_table();
    const std::size_t n_max = law.n_max();
    report.worst_slack = std::numeric_limits<double>::infinity();
    if (n_max < 3) {
        report.note = "no admissible triples (n_max < 3)";
        return report;
    }
    // d(j) = log K(j+1) - log K(j); slack(n, l) = d(n) - d(l-1).
    double best_prev = lk[2] - lk[1];
    std::size_t best_prev_at = 1;
    for (std::size_t n = 2; n + 1 <= n_max; ++n) {
        const double d = lk[n + 1] - lk[n];
        const double slack = d - best_prev;
        if (slack < report.worst_slack) {
            report.worst_slack = slack;
            report.witness = std::pair{n, best_prev_at + 1};
        }
        if (d > best_prev) {
            best_prev = d;
            best_prev_at = n;
        }
    }
    report.holds = report.worst_slack >= -log_convexity_tolerance;
    if (report.holds) report.witness.reset();
    return report;
}

std::vector<double> renewal_mass_function(const InterArrivalLaw& law, std::size_t N) {
    if (N > law.n_max() && !law.exact_beyond_table()) {
        std::ostringstream os;
        os << "renewal_mass_function: N=" << N << " exceeds kernel table n_max=" << law.n_max();
        throw ValidationError(os.str());
    }
    const auto K = law.mass_table();
    std::vector<double> u(N + 1, 0.0);
    u[0] = 1.0;
    for (std::size_t n = 1; n <= N; ++n) {
        CompensatedSum acc;
        for (std::size_t k = 1; k <= std::min(n, law.n_max()); ++k) acc.add(K[k] * u[n - k]);
        u[n] = acc.value();
    }
    return u;
}

std::vector<std::size_t> sample_renewal(const InterArrivalLaw& law, std::size_t N, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> points{0};
    std::size_t pos = 0;
    while (true) {
        pos += law.quantile(rng.uniform());
        if (pos > N) break;
        points.push_back(pos);
    }
    return points;
}

}  // namespace pinning
