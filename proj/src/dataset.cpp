#include "dea/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace dea {

namespace {

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

[[noreturn]] void reject(const std::string& dmu, const std::string& rule, const std::string& detail) {
  std::string message = dmu.empty() ? rule : "DMU '" + dmu + "': " + rule;
  if (!detail.empty()) message += " (" + detail + ")";
  throw ValidationError(dmu, rule, message);
}

}  // namespace

std::optional<std::size_t> Dataset::find(std::string_view name) const {
  for (std::size_t j = 0; j < dmus_.size(); ++j) {
    if (dmus_[j].name == name) return j;
  }
  return std::nullopt;
}

Dataset validate_dataset(std::vector<DmuRecord> records, bool allow_negative) {
  if (records.size() < 2) reject("", "fewer than 2 DMUs", std::to_string(records.size()) + " given");

  const std::size_t m = records.front().inputs.size();
  const std::size_t s = records.front().outputs.size();
  if (m == 0) reject(records.front().name, "no inputs", "");
  if (s == 0) reject(records.front().name, "no outputs", "");

  std::unordered_set<std::string> names;
  for (const auto& rec : records) {
    if (rec.name.empty()) reject("", "empty DMU name", "");
    if (!names.insert(rec.name).second) reject(rec.name, "duplicate name", "");
    if (rec.inputs.size() != m || rec.outputs.size() != s) {
      std::ostringstream os;
      os << "expected " << m << " inputs and " << s << " outputs, got " << rec.inputs.size() << " and "
         << rec.outputs.size();
      reject(rec.name, "dimension mismatch", os.str());
    }
    for (double v : rec.inputs) {
      if (!std::isfinite(v)) reject(rec.name, "non-finite value", "");
      if (v < 0.0 && !allow_negative) reject(rec.name, "negative value in non-negative mode", "");
    }
    for (double v : rec.outputs) {
      if (!std::isfinite(v)) reject(rec.name, "non-finite value", "");
      if (v < 0.0 && !allow_negative) reject(rec.name, "negative value in non-negative mode", "");
    }
    if (all_zero(rec.inputs)) reject(rec.name, "all-zero input vector", "");
    if (all_zero(rec.outputs)) reject(rec.name, "all-zero output vector", "");
  }

  Dataset d;
  d.dmus_ = std::move(records);
  d.m_ = m;
  d.s_ = s;
  d.allow_negative_ = allow_negative;
  return d;
}

RtsSpec RtsSpec::grs(double lower, std::optional<double> upper) {
  if (!(lower >= 0.0 && lower <= 1.0)) {
    throw ValidationError("", "invalid RTS bounds", "lower bound must lie in [0, 1]");
  }
  if (upper && !(*upper >= 1.0)) {
    throw ValidationError("", "invalid RTS bounds", "upper bound must be >= 1");
  }
  if (upper && std::isinf(*upper)) upper.reset();
  return {lower, upper};
}

std::string RtsSpec::to_string() const {
  if (is_crs()) return "crs";
  if (is_vrs()) return "vrs";
  std::ostringstream os;
  os << "grs(" << lower << ", ";
  if (upper) {
    os << *upper;
  } else {
    os << "inf";
  }
  os << ")";
  return os.str();
}

EvaluationContext::EvaluationContext(const Dataset& dataset, std::size_t o, RtsSpec rts)
    : dataset_(&dataset), o_(o), rts_(rts) {
  if (o >= dataset.size()) {
    throw ValidationError("", "unknown DMU", "index " + std::to_string(o) + " out of range");
  }
  if (dataset.allows_negative() && !rts.is_vrs()) {
    throw ValidationError("", "negative-data mode requires VRS",
                          "translation invariance only holds when sum(lambda) = 1");
  }
  // Re-check bounds for callers that built RtsSpec by hand.
  (void)RtsSpec::grs(rts.lower, rts.upper);
  reference_.reserve(dataset.size() - 1);
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    if (j != o) reference_.push_back(j);
  }
}

EvaluationContext make_context(const Dataset& dataset, std::size_t o, RtsSpec rts) {
  return EvaluationContext(dataset, o, rts);
}

EvaluationContext make_context(const Dataset& dataset, std::string_view name, RtsSpec rts) {
  auto idx = dataset.find(name);
  if (!idx) throw ValidationError(std::string(name), "unknown DMU", "");
  return EvaluationContext(dataset, *idx, rts);
}

}  // namespace dea
