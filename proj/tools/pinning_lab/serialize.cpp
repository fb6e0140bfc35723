#include "pinning_lab/serialize.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>

#include "pinning/error.hpp"

namespace pinning::cli {

namespace {

json real(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

}  // namespace

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

json to_json(const InterArrivalLaw& law) {
    json params = json::object();
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Stretched>) {
                params["zeta"] = fam.zeta;
            } else if constexpr (std::is_same_v<T, PowerLaw>) {
                params["alpha"] = fam.alpha;
            } else {
                json table = json::object();
                for (auto [gap, mass] : fam.table) table[std::to_string(gap)] = mass;
                params["table"] = table;
            }
        },
        law.spec().family);
    return {{"family", family_name(law.spec().family)},
            {"params", params},
            {"n_max", law.n_max()},
            {"log_norm", real(law.log_norm())},
            {"truncated_tail_mass", real(law.truncated_tail_mass())}};
}

json to_json(const LogConvexityReport& r) {
    json j = {{"applicable", r.applicable}, {"holds", r.holds}, {"worst_slack", real(r.worst_slack)}};
    j["witness"] = r.witness ? json{{"n", r.witness->first}, {"l", r.witness->second}} : json(nullptr);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json to_json(const DoublingConstant& c) {
    return {{"c_value", real(c.c_value)},
            {"C", real(c.C)},
            {"n_range", c.n_range},
            {"argmax", {{"N", c.arg_N}, {"a", c.arg_a}, {"b", c.arg_b}}},
            {"worst_exponent_gap", real(c.worst_exponent_gap)}};
}

json to_json(const FreeEnergyEstimate& e) {
    return {{"beta", e.params.beta},
            {"h", e.params.h},
            {"N", e.N},
            {"replicas", e.replicas},
            {"mean", real(e.mean_per_site)},
            {"stderr", real(e.std_error)},
            {"lo", real(e.bracket_lo)},
            {"hi", real(e.bracket_hi)}};
}

json to_json(const PhaseEvidence& e) {
    return {{"h", e.h},
            {"phase", to_string(e.phase)},
            {"estimate", to_json(e.estimate)},
            {"annealed", real(e.annealed)},
            {"upper", real(e.upper)},
            {"width", real(e.width)}};
}

json to_json(const CriticalEstimate& e) {
    json evidence = json::array();
    for (const auto& ev : e.evidence) evidence.push_back(to_json(ev));
    return {{"beta", e.beta},
            {"h_lo", e.h_lo},
            {"h_hi", e.h_hi},
            {"annealed_point", e.annealed_point},
            {"gap_lo", e.gap_lo},
            {"combined_stderr", real(e.combined_std_error)},
            {"lower_certified", e.lower_certified},
            {"evidence", evidence}};
}

json to_json(const CurvePoint& p) {
    return {{"u", p.u}, {"f", real(p.f)}, {"f_lo", real(p.f_lo)}, {"f_hi", real(p.f_hi)}};
}

json to_json(const ExponentFit& f) {
    return {{"zeta", f.zeta},
            {"nu_hat", real(f.nu_hat)},
            {"fit_window", {f.u_min, f.u_max}},
            {"r_squared", real(f.r_squared)},
            {"band_lo", f.band_lo},
            {"band_hi", f.band_hi},
            {"points_used", f.points_used},
            {"in_band", f.in_band}};
}

json to_json(const FkgReport& r) {
    return {{"N", r.N},
            {"min_covariance", real(r.min_covariance)},
            {"worst_pair", {r.worst_pair.first, r.worst_pair.second}},
            {"min_function_covariance", real(r.min_function_covariance)},
            {"worst_function_pair", r.worst_function_pair},
            {"min_lattice_log_ratio", real(r.min_lattice_log_ratio)},
            {"lattice_pairs_tested", r.lattice_pairs_tested},
            {"lattice_condition_ok", r.lattice_condition_ok},
            {"kernel_log_convex", r.kernel_log_convex}};
}

json to_json(const RareRegionResult& r) {
    return {{"X0", r.X0 ? json(*r.X0) : json(nullptr)},
            {"M", real(r.M)},
            {"within", r.within},
            {"blocks_scanned", r.blocks_scanned}};
}

json to_json(const RareRegionSummary& s) {
    return {{"trials", s.trials},
            {"M", real(s.M)},
            {"within_frequency", s.within_frequency},
            {"within_stderr", s.within_std_error},
            {"first_block_frequency", s.first_block_frequency},
            {"first_block_stderr", s.first_block_std_error},
            {"not_found", s.not_found}};
}

void write_environment_csv(std::ostream& os, const Environment& env) {
    os << "omega\n";
    for (double v : env.values()) os << format_real(v) << '\n';
}

void write_environment_binary(std::ostream& os, const Environment& env) {
    static_assert(std::endian::native == std::endian::little, "binary environment format is little-endian");
    os.write("PNENV001", 8);
    const std::uint64_t n = env.size();
    const std::uint64_t seed = env.seed();
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&seed), sizeof seed);
    os.write(reinterpret_cast<const char*>(env.values().data()), static_cast<std::streamsize>(n * sizeof(double)));
}

Environment read_environment_binary(std::istream& is, DisorderLaw law) {
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, "PNENV001", 8) != 0)
        throw ValidationError("not a PNENV001 environment file");
    std::uint64_t n = 0, seed = 0;
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&seed), sizeof seed);
    std::vector<double> values(n);
    is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw ValidationError("truncated environment file");
    return Environment(law, seed, std::move(values));
}

void write_profile_csv(std::ostream& os, std::span<const double> forward, const PartitionComputation& profile) {
    os << "n,log_forward,contact_probability\n";
    for (std::size_t n = 0; n < forward.size(); ++n)
        os << n << ',' << format_real(forward[n]) << ',' << format_real(profile.contact_probabilities[n]) << '\n';
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw std::logic_error("csv row width does not match header");
    rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& os) const {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

}  // namespace pinning::cli
