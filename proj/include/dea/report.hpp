#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dea/config.hpp"
#include "dea/dataset.hpp"
#include "dea/diagnostics.hpp"
#include "dea/directions.hpp"
#include "dea/models.hpp"

namespace dea {

struct DmuReport {
  std::string name;
  std::size_t index = 0;
  ScoreResult result;
  std::optional<std::size_t> rank;  // set for optimal units only
  SlackIndexSets sets;
  DirectionVector direction;
  std::vector<std::string> reference;  // names aligned with result.bundle.lambdas
};

struct RunMetadata {
  std::string model;
  std::string family;
  std::string direction;
  std::string rts;
  double feasibility_tol = 0.0;
  double value_tol = 0.0;
  std::string config_hash;
};

struct RunReport {
  RunMetadata meta;
  std::size_t num_inputs = 0;
  std::size_t num_outputs = 0;
  std::vector<DmuReport> units;  // dataset order
  /// Dataset indices in display order: ranked units first, then the rest.
  std::vector<std::size_t> order;
};

/// Evaluates every DMU against the others, in dataset order, then ranks.
RunReport run_evaluation(const Dataset& dataset, const RunConfig& config);

/// Descending score with ties broken by name; non-optimal units unranked.
void rank_dmus(RunReport& report);

class ReportWriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_report(const RunReport& report, ReportFormat format, std::ostream& out);
/// Writes to `path`, or stdout when empty. Throws ReportWriteError when the
/// destination cannot be written.
void emit_report(const RunReport& report, ReportFormat format, const std::string& path);

/// Zero-pattern and direction diagnostics for every DMU, without solving.
void write_check(const Dataset& dataset, const std::optional<RunConfig>& config, std::ostream& out);

}  // namespace dea
