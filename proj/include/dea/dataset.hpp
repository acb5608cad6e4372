#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dea {

/// One decision-making unit: a name plus its input and output quantities.
struct DmuRecord {
  std::string name;
  std::vector<double> inputs;
  std::vector<double> outputs;

  bool operator==(const DmuRecord&) const = default;
};

/// Raised when raw data or an evaluation request breaks a dataset rule.
/// `dmu()` is empty when the rule is not tied to a single unit.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string dmu, std::string rule, const std::string& message)
      : std::runtime_error(message), dmu_(std::move(dmu)), rule_(std::move(rule)) {}

  const std::string& dmu() const noexcept { return dmu_; }
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string dmu_;
  std::string rule_;
};

/// Immutable, validated collection of DMUs sharing the same input/output
/// dimensions. Index order is the order the records were supplied in.
class Dataset {
 public:
  std::size_t size() const noexcept { return dmus_.size(); }
  std::size_t num_inputs() const noexcept { return m_; }
  std::size_t num_outputs() const noexcept { return s_; }
  bool allows_negative() const noexcept { return allow_negative_; }

  const std::vector<DmuRecord>& dmus() const noexcept { return dmus_; }
  const DmuRecord& dmu(std::size_t j) const { return dmus_.at(j); }
  double input(std::size_t i, std::size_t j) const { return dmus_[j].inputs[i]; }
  double output(std::size_t r, std::size_t j) const { return dmus_[j].outputs[r]; }

  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const Dataset&) const = default;

 private:
  friend Dataset validate_dataset(std::vector<DmuRecord> records, bool allow_negative);

  std::vector<DmuRecord> dmus_;
  std::size_t m_ = 0;
  std::size_t s_ = 0;
  bool allow_negative_ = false;
};

/// Checks dimensions, names, zero vectors and signs. Throws ValidationError
/// naming the offending DMU and rule.
Dataset validate_dataset(std::vector<DmuRecord> records, bool allow_negative = false);

/// Re-validates an existing dataset; identity on valid input.
inline Dataset validate_dataset(const Dataset& dataset) {
  return validate_dataset(dataset.dmus(), dataset.allows_negative());
}

/// Bounds L <= sum(lambda) <= U on the intensity weights.
struct RtsSpec {
  double lower = 0.0;
  std::optional<double> upper;  // nullopt: unbounded

  static RtsSpec crs() { return {0.0, std::nullopt}; }
  static RtsSpec vrs() { return {1.0, 1.0}; }
  static RtsSpec grs(double lower, std::optional<double> upper);

  bool is_crs() const noexcept { return lower == 0.0 && !upper; }
  bool is_vrs() const noexcept { return lower == 1.0 && upper && *upper == 1.0; }

  std::string to_string() const;

  bool operator==(const RtsSpec&) const = default;
};

/// The unit under evaluation `o`, its reference set J (everything else) and
/// the returns-to-scale bounds. Holds a non-owning pointer to the dataset,
/// which must outlive the context.
class EvaluationContext {
 public:
  EvaluationContext(const Dataset& dataset, std::size_t o, RtsSpec rts);

  const Dataset& dataset() const noexcept { return *dataset_; }
  std::size_t unit() const noexcept { return o_; }
  const std::vector<std::size_t>& reference_set() const noexcept { return reference_; }
  const RtsSpec& rts() const noexcept { return rts_; }

  std::size_t num_inputs() const noexcept { return dataset_->num_inputs(); }
  std::size_t num_outputs() const noexcept { return dataset_->num_outputs(); }
  const DmuRecord& evaluated() const { return dataset_->dmu(o_); }

 private:
  const Dataset* dataset_;
  std::size_t o_;
  std::vector<std::size_t> reference_;
  RtsSpec rts_;
};

EvaluationContext make_context(const Dataset& dataset, std::size_t o, RtsSpec rts);
EvaluationContext make_context(const Dataset& dataset, std::string_view name, RtsSpec rts);

}  // namespace dea
