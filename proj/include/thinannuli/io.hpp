#pragma once

// Output formats shared by the CLI: CSV with a commented RunConfig header,
// and versioned JSON documents embedding the same RunConfig.

#include "thinannuli/close_pairs.hpp"
#include "thinannuli/dioph.hpp"
#include "thinannuli/ensemble.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace thinannuli {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string command;
  double alpha;
  double beta;
  std::uint64_t seed = 0;
  std::string output;
  std::string format = "json";
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
};

/// Shortest decimal form that round-trips to the same double, at most 17
/// significant digits.
std::string format_real(double x);

/// "# version ..." and "# run_config {...}" lines.
void write_csv_header(std::ostream& out, const RunConfig& cfg);

void write_series_csv(std::ostream& out, const RunConfig& cfg, const SampleSeries& series);
void write_scaling_csv(std::ostream& out, const RunConfig& cfg, const std::vector<ScalingRow>& rows);
void write_minima_csv(std::ostream& out, const RunConfig& cfg, const ExponentFit& fit);

/// Document skeleton: {"schema", "version", "run_config"}.
nlohmann::ordered_json make_document(const RunConfig& cfg);

nlohmann::ordered_json to_json(const MomentReport& r);
nlohmann::ordered_json to_json(const ExponentFit& fit);
nlohmann::ordered_json to_json(const SqrtSumGap& gap);

/// JSON text with non-finite numbers written as null, newline-terminated.
std::string dump(const nlohmann::ordered_json& doc);

}  // namespace thinannuli
