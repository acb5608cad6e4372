#include "dea/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "dea/models.hpp"

namespace dea {

DataFormatError::DataFormatError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + (column ? ", column " + std::to_string(column) : "") + ": " +
                         message),
      line_(line),
      column_(column) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Dataset parse_dataset_csv(std::istream& in, bool allow_negative) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<bool> is_input;  // per data column after `dmu`
  bool have_header = false;
  std::vector<DmuRecord> records;

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty() || view.front() == '#') continue;
    const auto cells = split(view, ',');

    if (!have_header) {
      if (cells[0] != "dmu") throw DataFormatError(lineno, 1, "first header column must be 'dmu'");
      bool any_in = false;
      bool any_out = false;
      for (std::size_t c = 1; c < cells.size(); ++c) {
        const auto cell = cells[c];
        if (cell.starts_with("i:") && cell.size() > 2) {
          is_input.push_back(true);
          any_in = true;
        } else if (cell.starts_with("o:") && cell.size() > 2) {
          is_input.push_back(false);
          any_out = true;
        } else {
          throw DataFormatError(lineno, c + 1, "header '" + std::string(cell) + "' needs an 'i:' or 'o:' prefix");
        }
      }
      if (!any_in) throw DataFormatError(lineno, 0, "header has no 'i:' column");
      if (!any_out) throw DataFormatError(lineno, 0, "header has no 'o:' column");
      have_header = true;
      continue;
    }

    if (cells.size() != is_input.size() + 1) {
      throw DataFormatError(lineno, 0,
                            "expected " + std::to_string(is_input.size() + 1) + " cells, got " +
                                std::to_string(cells.size()));
    }
    DmuRecord rec;
    rec.name = std::string(cells[0]);
    if (rec.name.empty()) throw DataFormatError(lineno, 1, "empty DMU name");
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto v = to_double(cells[c]);
      if (!v) throw DataFormatError(lineno, c + 1, "'" + std::string(cells[c]) + "' is not a number");
      (is_input[c - 1] ? rec.inputs : rec.outputs).push_back(*v);
    }
    records.push_back(std::move(rec));
  }
  if (!have_header) throw DataFormatError(lineno, 0, "missing header row");
  return validate_dataset(std::move(records), allow_negative);
}

Dataset load_dataset(const std::string& path, bool allow_negative) {
  std::ifstream in(path);
  if (!in) throw ValidationError("", "io", "cannot open data file '" + path + "'");
  return parse_dataset_csv(in, allow_negative);
}

const char* to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::table: return "table";
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
  }
  return "unknown";
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double number(std::size_t line, std::string_view key, std::string_view s) {
  const auto v = to_double(s);
  if (!v || !std::isfinite(*v)) fail(line, std::string(key) + ": '" + std::string(s) + "' is not a finite number");
  return *v;
}

std::vector<double> number_list(std::size_t line, std::string_view key, std::string_view s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (auto cell : split(s, ',')) out.push_back(number(line, key, cell));
  return out;
}

bool boolean(std::size_t line, std::string_view key, std::string_view s) {
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  fail(line, std::string(key) + ": expected true or false, got '" + std::string(s) + "'");
}

std::size_t count(std::size_t line, std::string_view key, std::string_view s) {
  if (s == "all") return std::numeric_limits<std::size_t>::max();
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(line, std::string(key) + ": expected a count or 'all', got '" + std::string(s) + "'");
  }
  return v;
}

RtsSpec parse_rts(std::size_t line, std::string_view s) {
  if (s == "crs") return RtsSpec::crs();
  if (s == "vrs") return RtsSpec::vrs();
  if (s.starts_with("grs(") && s.ends_with(")")) {
    const auto parts = split(s.substr(4, s.size() - 5), ',');
    if (parts.size() != 2) fail(line, "rts: grs needs two bounds, e.g. grs(0.8, 1.2)");
    const double lo = number(line, "rts", parts[0]);
    std::optional<double> hi;
    if (parts[1] != "inf") hi = number(line, "rts", parts[1]);
    try {
      return RtsSpec::grs(lo, hi);
    } catch (const std::exception& e) {
      fail(line, std::string("rts: ") + e.what());
    }
  }
  fail(line, "rts: expected crs, vrs or grs(L, U), got '" + std::string(s) + "'");
}

std::string render_list(const std::vector<double>& v) {
  std::string out;
  char buf[32];
  for (std::size_t k = 0; k < v.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", v[k]);
    if (k) out += ", ";
    out += buf;
  }
  return out;
}

std::string render_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_count(const std::optional<std::size_t>& v) {
  if (!v) return "default";
  if (*v == std::numeric_limits<std::size_t>::max()) return "all";
  return std::to_string(*v);
}

}  // namespace

bool RunConfig::is_preset() const { return !parse_family(model).has_value(); }

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "model = " << model << "\n";
  os << "rts = " << (rts ? rts->to_string() : "default") << "\n";
  os << "direction = " << to_string(direction);
  if (direction == DirectionStrategy::custom) os << "(" << render_list(custom_minus) << " | " << render_list(custom_plus) << ")";
  os << "\n";
  os << "include_self = " << (include_self ? "true" : "false") << "\n";
  os << "weights = " << render_list(weights) << "\n";
  os << "enforce_output_nonneg = " << (enforce_output_nonneg ? "true" : "false") << "\n";
  os << "big_m = " << render_number(params.big_m) << "\n";
  os << "ray_a = " << (params.ray_a ? render_number(*params.ray_a) : "unset") << "\n";
  os << "ray_b = " << (params.ray_b ? render_number(*params.ray_b) : "unset") << "\n";
  os << "radial_inputs = " << render_count(radial_inputs) << "\n";
  os << "radial_outputs = " << render_count(radial_outputs) << "\n";
  os << "free_input_adjustment = " << (free_input_adjustment ? "true" : "false") << "\n";
  os << "free_output_adjustment = " << (free_output_adjustment ? "true" : "false") << "\n";
  os << "allow_negative = " << (allow_negative ? "true" : "false") << "\n";
  return os.str();
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical()); }

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t lineno = 0;
  for (auto raw : split(text, '\n')) {
    ++lineno;
    auto line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(lineno, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) fail(lineno, "key '" + std::string(key) + "' given twice");

    if (key == "model") {
      if (value.empty()) fail(lineno, "model: empty value");
      cfg.model = std::string(value);
      if (!parse_family(value)) {
        try {
          cfg.model = find_preset(value).name;
        } catch (const PresetError&) {
          fail(lineno, "model: '" + std::string(value) + "' is neither a model family nor a preset");
        }
      }
    } else if (key == "rts") {
      cfg.rts = parse_rts(lineno, value);
    } else if (key == "direction") {
      if (value == "own_data") {
        cfg.direction = DirectionStrategy::own_data;
      } else if (value == "column_max") {
        cfg.direction = DirectionStrategy::column_max;
      } else if (value == "column_range") {
        cfg.direction = DirectionStrategy::column_range;
      } else if (value.starts_with("custom(") && value.ends_with(")")) {
        const auto body = value.substr(7, value.size() - 8);
        const auto bar = body.find('|');
        if (bar == std::string_view::npos) fail(lineno, "direction: custom needs 'g- | g+', e.g. custom(8, 5 | 1, 1)");
        cfg.direction = DirectionStrategy::custom;
        cfg.custom_minus = number_list(lineno, key, body.substr(0, bar));
        cfg.custom_plus = number_list(lineno, key, body.substr(bar + 1));
      } else {
        fail(lineno, "direction: expected own_data, column_max, column_range or custom(...), got '" +
                         std::string(value) + "'");
      }
    } else if (key == "include_self") {
      cfg.include_self = boolean(lineno, key, value);
    } else if (key == "weights") {
      cfg.weights = number_list(lineno, key, value);
      for (double w : cfg.weights) {
        if (!(w > 0.0)) fail(lineno, "weights must be positive");
      }
    } else if (key == "enforce_output_nonneg") {
      cfg.enforce_output_nonneg = boolean(lineno, key, value);
    } else if (key == "big_m") {
      cfg.params.big_m = number(lineno, key, value);
      if (!(cfg.params.big_m > 0.0)) fail(lineno, "big_m must be positive");
    } else if (key == "ray_a") {
      cfg.params.ray_a = number(lineno, key, value);
      if (*cfg.params.ray_a < 0.0) fail(lineno, "ray_a must be non-negative");
    } else if (key == "ray_b") {
      cfg.params.ray_b = number(lineno, key, value);
      if (*cfg.params.ray_b < 0.0) fail(lineno, "ray_b must be non-negative");
    } else if (key == "radial_inputs") {
      cfg.radial_inputs = count(lineno, key, value);
    } else if (key == "radial_outputs") {
      cfg.radial_outputs = count(lineno, key, value);
    } else if (key == "free_input_adjustment") {
      cfg.free_input_adjustment = boolean(lineno, key, value);
    } else if (key == "free_output_adjustment") {
      cfg.free_output_adjustment = boolean(lineno, key, value);
    } else if (key == "allow_negative") {
      cfg.allow_negative = boolean(lineno, key, value);
    } else if (key == "format") {
      if (value == "table") {
        cfg.format = ReportFormat::table;
      } else if (value == "csv") {
        cfg.format = ReportFormat::csv;
      } else if (value == "json") {
        cfg.format = ReportFormat::json;
      } else {
        fail(lineno, "format: expected table, csv or json");
      }
    } else if (key == "output") {
      cfg.output = std::string(value);
    } else {
      fail(lineno, "unknown key '" + std::string(key) + "'");
    }
  }

  if (cfg.is_preset()) {
    const auto& p = find_preset(cfg.model);
    if (cfg.rts && !(*cfg.rts == p.rts)) {
      throw ConfigError("rts: preset " + p.name + " fixes " + p.rts.to_string() + "; remove the rts key");
    }
    for (const char* k : {"direction", "include_self", "enforce_output_nonneg", "radial_inputs", "radial_outputs",
                          "free_input_adjustment", "free_output_adjustment"}) {
      if (seen.count(k)) throw ConfigError(std::string(k) + ": preset " + p.name + " fixes this setting");
    }
  } else {
    for (const char* k : {"big_m", "ray_a", "ray_b"}) {
      if (seen.count(k)) throw ConfigError(std::string(k) + ": only used by catalog presets");
    }
    const auto family = *parse_family(cfg.model);
    if (family != ModelFamily::hdse) {
      for (const char* k : {"radial_inputs", "radial_outputs", "free_input_adjustment", "free_output_adjustment"}) {
        if (seen.count(k)) throw ConfigError(std::string(k) + ": only used by the hdse family");
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

void check_config(const RunConfig& config, const Dataset& dataset) {
  const std::size_t m = dataset.num_inputs();
  const std::size_t s = dataset.num_outputs();
  if (config.allow_negative != dataset.allows_negative()) {
    throw ConfigError("allow_negative does not match the loaded dataset");
  }
  if (!config.weights.empty() && config.weights.size() != m + s) {
    throw ConfigError("weights: expected " + std::to_string(m + s) + " values (inputs then outputs), got " +
                      std::to_string(config.weights.size()));
  }
  if (config.direction == DirectionStrategy::custom) {
    if (config.custom_minus.size() != m || config.custom_plus.size() != s) {
      throw ConfigError("direction: custom direction has " + std::to_string(config.custom_minus.size()) + " | " +
                        std::to_string(config.custom_plus.size()) + " components, data has " + std::to_string(m) +
                        " inputs and " + std::to_string(s) + " outputs");
    }
    try {
      make_custom_direction(config.custom_minus, config.custom_plus);
    } catch (const DirectionError& e) {
      throw ConfigError(std::string("direction: ") + e.what());
    }
  }
  const RtsSpec rts = config.is_preset() ? find_preset(config.model).rts : config.rts.value_or(RtsSpec::crs());
  if (dataset.allows_negative() && !rts.is_vrs()) {
    throw ConfigError("allow_negative requires VRS; the run uses " + rts.to_string());
  }
  if (config.radial_inputs && *config.radial_inputs != std::numeric_limits<std::size_t>::max() &&
      *config.radial_inputs > m) {
    throw ConfigError("radial_inputs exceeds the number of inputs");
  }
  if (config.radial_outputs && *config.radial_outputs != std::numeric_limits<std::size_t>::max() &&
      *config.radial_outputs > s) {
    throw ConfigError("radial_outputs exceeds the number of outputs");
  }
  if (config.is_preset() && find_preset(config.model).recipe == DirectionRecipe::modified_ray &&
      (!config.params.ray_a || !config.params.ray_b)) {
    throw ConfigError("preset M-Ray needs ray_a and ray_b");
  }
}

}  // namespace dea
