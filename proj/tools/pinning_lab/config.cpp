#include "pinning_lab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pinning/error.hpp"

namespace pinning::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

const std::map<std::string, std::string>& synonyms() {
    static const std::map<std::string, std::string> m = {
        {"h_grid", "h"}, {"N_list", "N"}, {"master_seed", "seed"}, {"beta_list", "beta"}};
    return m;
}

// Defaults in their textual form; the echo is built from these overlaid with user keys.
const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> m = {
        {"kernel", "stretched"},
        {"zeta", "0.5"},
        {"alpha", "2"},
        {"custom_table", ""},
        {"n_max", "0"},
        {"tail_tolerance", "1e-14"},
        {"disorder", "gaussian"},
        {"beta", "0"},
        {"h", "0"},
        {"N", "64"},
        {"replicas", "100"},
        {"seed", "1"},
        {"contact_cap", "512"},
        {"brute_force_cap", "12"},
        {"n_range", "0"},
        {"h_window", ""},
        {"threshold_multiplier", "0"},
        {"sigma_multiplier", "3"},
        {"tolerance", "1e-3"},
        {"mode", "quenched"},
        {"synthetic_nu", "2"},
        {"u_min", "1e-3"},
        {"u_max", "1e-1"},
        {"u_points", "8"},
        {"h_c", ""},
        {"environments", "1"},
        {"lattice_pairs", "1000"},
        {"n_block", "100"},
        {"u", "2"},
        {"max_blocks", "0"},
        {"trials", "1000"},
        {"format", "json"},
        {"output", ""},
        {"threads", "1"},
    };
    return m;
}

double parse_real(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (t.empty() || ec != std::errc() || ptr != last)
        throw ValidationError("config key '" + key + "': expected a real number, got '" + t + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ValidationError("config key '" + key + "': expected a non-negative integer, got '" + t + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::map<std::size_t, double> parse_table(const std::string& text) {
    std::map<std::size_t, double> table;
    for (const auto& entry : split(text, ',')) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos)
            throw ValidationError("config key 'custom_table': entries must look like gap:mass, got '" + entry + "'");
        const auto gap = parse_uint("custom_table", entry.substr(0, colon));
        const auto mass = parse_real("custom_table", entry.substr(colon + 1));
        if (!table.emplace(gap, mass).second)
            throw ValidationError("config key 'custom_table': duplicate gap " + std::to_string(gap));
    }
    if (table.empty()) throw ValidationError("config key 'custom_table' is required for kernel = custom");
    return table;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
    KeyValueConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << origin << ":" << lineno << ": expected 'key = value'";
            throw ValidationError(os.str());
        }
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    std::string k = trim(key);
    if (auto it = synonyms().find(k); it != synonyms().end()) k = it->second;
    if (!defaults().count(k)) throw ValidationError("unknown config key '" + key + "'");
    values_[k] = trim(value);
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [key, _] : defaults()) k.push_back(key);
        return k;
    }();
    return keys;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_real(key, item));
    if (out.empty()) throw ValidationError("config key '" + key + "' must hold at least one value");
    return out;
}

ExperimentConfig resolve(const KeyValueConfig& kv) {
    std::map<std::string, std::string> merged = defaults();
    for (const auto& [k, v] : kv.values()) merged[k] = v;
    auto val = [&](const std::string& k) -> const std::string& { return merged.at(k); };
    auto real = [&](const std::string& k) { return parse_real(k, val(k)); };
    auto uint = [&](const std::string& k) { return parse_uint(k, val(k)); };

    ExperimentConfig c;

    const std::string kernel = val("kernel");
    if (kernel == "stretched") {
        c.kernel.family = Stretched{real("zeta")};
    } else if (kernel == "powerlaw") {
        c.kernel.family = PowerLaw{real("alpha")};
    } else if (kernel == "custom") {
        c.kernel.family = Custom{parse_table(val("custom_table"))};
    } else {
        throw ValidationError("config key 'kernel': expected stretched|powerlaw|custom, got '" + kernel + "'");
    }
    c.kernel.n_max = uint("n_max");
    c.kernel.tail_tolerance = real("tail_tolerance");
    c.disorder = parse_disorder_law(val("disorder"));

    c.beta = parse_real_list("beta", val("beta"));
    for (double b : c.beta)
        if (!(b >= 0.0)) throw ValidationError("config key 'beta': values must be non-negative");
    c.h = parse_real_list("h", val("h"));
    c.N.clear();
    for (const auto& item : split(val("N"), ',')) {
        const auto n = parse_uint("N", item);
        if (n == 0) throw ValidationError("config key 'N': values must be positive");
        c.N.push_back(static_cast<std::size_t>(n));
    }
    if (c.N.empty()) throw ValidationError("config key 'N' must hold at least one value");
    c.replicas = uint("replicas");
    c.master_seed = uint("seed");
    c.contact_cap = uint("contact_cap");
    c.brute_force_cap = uint("brute_force_cap");
    c.n_range = uint("n_range");

    if (!val("h_window").empty()) {
        const auto w = parse_real_list("h_window", val("h_window"));
        if (w.size() != 2 || !(w[0] < w[1]))
            throw ValidationError("config key 'h_window': expected 'h_min, h_max' with h_min < h_max");
        c.h_window = std::pair{w[0], w[1]};
    }
    c.threshold_multiplier = real("threshold_multiplier");
    c.sigma_multiplier = real("sigma_multiplier");
    c.tolerance = real("tolerance");

    c.exponent_mode = val("mode");
    if (c.exponent_mode != "quenched" && c.exponent_mode != "pure" && c.exponent_mode != "synthetic")
        throw ValidationError("config key 'mode': expected quenched|pure|synthetic");
    c.synthetic_nu = real("synthetic_nu");
    c.u_min = real("u_min");
    c.u_max = real("u_max");
    c.u_points = uint("u_points");
    if (!(c.u_min > 0.0 && c.u_min < c.u_max)) throw ValidationError("config keys 'u_min'/'u_max': need 0 < u_min < u_max");
    if (c.u_points < 2) throw ValidationError("config key 'u_points': need at least 2");
    if (!val("h_c").empty()) c.h_c = real("h_c");

    c.environments = uint("environments");
    c.lattice_pairs = uint("lattice_pairs");
    c.n_block = uint("n_block");
    c.u = real("u");
    c.max_blocks = uint("max_blocks");
    c.trials = uint("trials");

    const std::string fmt = val("format");
    if (fmt == "json")
        c.format = OutputFormat::Json;
    else if (fmt == "csv")
        c.format = OutputFormat::Csv;
    else
        throw ValidationError("config key 'format': expected csv|json");
    c.output = val("output");
    const auto threads = uint("threads");
    if (threads == 0 || threads > 1024) throw ValidationError("config key 'threads': expected 1..1024");
    c.threads = static_cast<unsigned>(threads);

    for (const auto& [k, v] : merged)
        if (k != "threads" && k != "output") c.echo[k] = v;
    return c;
}

}  // namespace pinning::cli
