#pragma once

#include <string>
#include <variant>

#include "arakelov/invariants.hpp"

namespace arakelov {

enum class OutputFormat { Json, Csv };

struct RunConfig {
  double eps = kDefaultThetaEps;
  std::size_t samples = 200000;
  std::uint64_t seed = 42;
  int quad_order = 128;
  SampleKind kind = SampleKind::LowDiscrepancy;
  OutputFormat format = OutputFormat::Json;

  IntegrationConfig integration() const;
  void validate() const;  // throws InvalidInput unless every field is positive
};

extern const char* const kVersion;

// %.17g: round-trips every double.
std::string format_number(double v);

std::string read_file(const std::string& path);
// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::string& path, const std::string& content);

std::string curve_to_json(const HyperellipticCurve& curve);
HyperellipticCurve curve_from_json(const std::string& text);
std::string period_to_json(const PeriodMatrix& omega);
PeriodMatrix period_from_json(const std::string& text);

// A curve preset ("xn+1:<n>"), or a curve or period JSON file.
using InputSpec = std::variant<HyperellipticCurve, PeriodMatrix>;
InputSpec load_input(const std::string& spec);

std::string config_to_json(const RunConfig& config);
std::string report_to_json(const InvariantReport& report, const RunConfig& config);
// One row per invariant: name, value, stderr, samples, censored, provenance.
std::string report_to_csv(const InvariantReport& report);

}  // namespace arakelov
