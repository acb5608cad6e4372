#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dea/catalog.hpp"
#include "dea/dataset.hpp"
#include "dea/directions.hpp"

namespace dea {

/// Malformed CSV input. Line and column are 1-based; column is 0 when the
/// problem concerns a whole line.
class DataFormatError : public std::runtime_error {
 public:
  DataFormatError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Reads `dmu,i:<name>...,o:<name>...` CSV and validates the result.
Dataset parse_dataset_csv(std::istream& in, bool allow_negative = false);
Dataset load_dataset(const std::string& path, bool allow_negative = false);

enum class ReportFormat { table, csv, json };

const char* to_string(ReportFormat f);

struct RunConfig {
  /// A catalog preset name or a model family name (rdse, fractional_gdse, ...).
  std::string model = "fractional_gdse";
  std::optional<RtsSpec> rts;  // family runs default to CRS; presets carry their own
  DirectionStrategy direction = DirectionStrategy::column_max;
  std::vector<double> custom_minus;  // used when direction == custom
  std::vector<double> custom_plus;
  bool include_self = true;
  std::vector<double> weights;  // inputs then outputs; empty means none
  bool enforce_output_nonneg = true;
  PresetParams params;
  std::optional<std::size_t> radial_inputs;   // hdse; default all
  std::optional<std::size_t> radial_outputs;  // hdse; default all
  bool free_input_adjustment = false;
  bool free_output_adjustment = false;
  bool allow_negative = false;
  ReportFormat format = ReportFormat::table;
  std::string output;  // empty writes to stdout

  bool is_preset() const;
  /// One `key = value` line per setting in a fixed order. Hashing this text
  /// identifies the run independently of comments and key order.
  std::string canonical() const;
  std::string hash() const;
};

/// Parses the flat `key = value` format. `#` starts a comment. Unknown keys,
/// repeated keys and malformed values throw ConfigError naming the line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Rejects settings that contradict each other or the dataset's dimensions.
void check_config(const RunConfig& config, const Dataset& dataset);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace dea
