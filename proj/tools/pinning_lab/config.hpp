#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pinning/disorder.hpp"
#include "pinning/kernel.hpp"

namespace pinning::cli {

/// Flat key/value document:
///
///   # comment
///   kernel = stretched
///   zeta = 0.5
///   h = 0.05, 0.1, 0.5
///
/// Keys are case-sensitive; list values are comma separated.
class KeyValueConfig {
  public:
    static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
    static KeyValueConfig load(const std::string& path);

    /// Later sets override earlier ones; synonyms are folded to canonical keys.
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

enum class OutputFormat { Json, Csv };

/// Fully resolved run configuration. Everything except `threads` and the
/// output destination determines the result bytes.
struct ExperimentConfig {
    KernelSpec kernel;
    DisorderLaw disorder = DisorderLaw::Gaussian;
    std::vector<double> beta{0.0};
    std::vector<double> h{0.0};
    std::vector<std::size_t> N{64};
    std::size_t replicas = 100;
    std::uint64_t master_seed = 1;

    std::size_t contact_cap = 512;
    std::size_t brute_force_cap = 12;
    std::size_t n_range = 0;  // 0 -> default doubling horizon

    std::optional<std::pair<double, double>> h_window;
    double threshold_multiplier = 0.0;
    double sigma_multiplier = 3.0;
    double tolerance = 1e-3;

    std::string exponent_mode = "quenched";  // quenched | pure | synthetic
    double synthetic_nu = 2.0;
    double u_min = 1e-3;
    double u_max = 1e-1;
    std::size_t u_points = 8;
    std::optional<double> h_c;

    std::size_t environments = 1;
    std::size_t lattice_pairs = 1000;

    std::size_t n_block = 100;
    double u = 2.0;
    std::size_t max_blocks = 0;  // 0 -> ceil(M)
    std::size_t trials = 1000;

    OutputFormat format = OutputFormat::Json;
    std::string output;  // empty -> stdout
    unsigned threads = 1;

    /// Canonical key/value echo (sorted, excludes threads and output path).
    std::map<std::string, std::string> echo;
};

/// Keys understood by the tool, with defaults applied when absent.
const std::vector<std::string>& known_keys();

/// Validates and converts; throws ValidationError with the offending key.
ExperimentConfig resolve(const KeyValueConfig& kv);

std::vector<double> parse_real_list(const std::string& key, const std::string& text);

}  // namespace pinning::cli
