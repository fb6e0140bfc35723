#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pinning_lab/config.hpp"
#include "pinning_lab/serialize.hpp"

namespace pinning::cli {

struct CommandResult {
    json result;
    /// Tabular form for --format csv; commands without one reject csv.
    std::optional<CsvTable> table;
    /// Extra "# ..." lines written above a CSV table.
    std::vector<std::string> csv_notes;
    int exit_code = 0;
};

/// Stable CSV headers.
const std::vector<std::string>& free_energy_csv_header();
const std::vector<std::string>& curve_csv_header();

/// Builds the law of the config, widening an automatic horizon to cover `needed_N`.
InterArrivalLaw build_law(const ExperimentConfig& cfg, std::size_t needed_N);

CommandResult cmd_validate_kernel(const ExperimentConfig& cfg);
CommandResult cmd_free_energy(const ExperimentConfig& cfg);
CommandResult cmd_critical(const ExperimentConfig& cfg);
CommandResult cmd_exponent(const ExperimentConfig& cfg);
CommandResult cmd_fkg(const ExperimentConfig& cfg);
CommandResult cmd_rare_region(const ExperimentConfig& cfg);

}  // namespace pinning::cli
