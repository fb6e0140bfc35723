#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinning/disorder.hpp"
#include "pinning/kernel.hpp"
#include "pinning/polymer.hpp"
#include "pinning/thermo.hpp"
#include "pinning/transition.hpp"

namespace pinning::cli {

using nlohmann::json;

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_real(double x);

/// {family, params, n_max, log_norm, truncated_tail_mass}
json to_json(const InterArrivalLaw& law);
json to_json(const LogConvexityReport& r);
json to_json(const DoublingConstant& c);
json to_json(const FreeEnergyEstimate& e);
json to_json(const PhaseEvidence& e);
json to_json(const CriticalEstimate& e);
json to_json(const CurvePoint& p);
json to_json(const ExponentFit& f);
json to_json(const FkgReport& r);
json to_json(const RareRegionResult& r);
json to_json(const RareRegionSummary& s);

/// Single "omega" column, one site per row.
void write_environment_csv(std::ostream& os, const Environment& env);
/// "PNENV001" magic, uint64 N, uint64 seed, then N little-endian IEEE doubles.
void write_environment_binary(std::ostream& os, const Environment& env);
Environment read_environment_binary(std::istream& is, DisorderLaw law);

/// Columns n, log_forward, contact_probability.
void write_profile_csv(std::ostream& os, std::span<const double> forward, const PartitionComputation& profile);

/// Minimal CSV table that writes its header once.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void add_row(std::vector<std::string> row);
    void write(std::ostream& os) const;
    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace pinning::cli
