#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hylent/real.hpp"
#include "hylent/system.hpp"

namespace hylent {

enum class OutputFormat { Csv, Json };
enum class SweepAxis { InverseMass, Charge };

struct RunConfig {
  std::string system = "helium";
  /// Overrides of the preset; inverse_mass = 0 is the clamped nucleus.
  std::optional<double> charge;
  std::optional<double> inverse_mass;
  std::vector<int> omegas{3};
  int precision_digits = 33;
  std::optional<double> alpha_low;
  std::optional<double> alpha_high;
  double tol_i4 = 1e-13;
  std::uint64_t seed = 20140611;
  std::string output_path;  ///< empty: stdout
  OutputFormat format = OutputFormat::Csv;
  int threads = 1;

  // extrapolate
  std::string series_path;
  /// Final-estimate uncertainty floor; 0 picks the per-system default.
  double uncertainty_floor = 0.0;

  // sweep
  SweepAxis axis = SweepAxis::Charge;
  std::vector<double> grid;

  // verify
  std::uint64_t samples = 10'000'000;
  int random_keys = 25;
  bool corrupt = false;

  SystemSpec system_spec() const;
  /// Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
};

/// Defaults with the precision taken from HYLL_PRECISION_DIGITS when set.
RunConfig default_config();

/// Parses flat `key = value` text ('#' starts a comment). Unknown keys and
/// malformed values throw InvalidArgument.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies one key=value setting to the configuration.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

void load_config_file(RunConfig& config, const std::string& path);

/// "3,4,5", "2-6" or a mix such as "2-4,6".
std::vector<int> parse_int_list(const std::string& text);
/// "1,1.2,1.4" or "start:stop:step".
std::vector<double> parse_real_list(const std::string& text);

std::string to_string(OutputFormat f);
std::string to_string(SweepAxis a);

}  // namespace hylent
