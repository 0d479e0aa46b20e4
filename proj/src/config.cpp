#include "scm/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "scm/error.hpp"

namespace scm {

MonthKey PipelineConfig::enforcement() const {
  if (enforcement_start) return *enforcement_start;
  if (design.treatment_start == MonthKey{2023, 11}) return {2024, 1};
  return design.treatment_start;  // no anticipation window
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ConfigError("config key '" + key + "': bad number '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ConfigError("config key '" + key + "': bad integer '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" +
                    value + "'");
}

MonthKey parse_month(const std::string& key, const std::string& value) {
  try {
    return MonthKey::parse(value);
  } catch (const DataError& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

}  // namespace

PipelineConfig parse_config(std::istream& in, const std::string& source_name) {
  PipelineConfig config;
  config.event_months = {{2024, 6}, {2024, 7}};
  config.event_note = "UEFA Euro 2024";

  std::optional<MonthKey> pre_start, pre_end, treatment_start, eval_end;

  std::string line;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!seen.insert(key).second)
      throw ConfigError(where + ": duplicate key '" + key + "'");

    if (key == "treated_id") {
      config.treated_id = value;
    } else if (key == "donor_ids") {
      config.donor_ids = split_list(value);
    } else if (key == "pre_start") {
      pre_start = parse_month(key, value);
    } else if (key == "pre_end") {
      pre_end = parse_month(key, value);
    } else if (key == "treatment_start") {
      treatment_start = parse_month(key, value);
    } else if (key == "eval_end") {
      eval_end = parse_month(key, value);
    } else if (key == "tax_old") {
      config.tax_old = parse_double(key, value);
    } else if (key == "tax_new") {
      config.tax_new = parse_double(key, value);
    } else if (key == "objective_tol") {
      config.solver.objective_tol = parse_double(key, value);
    } else if (key == "kkt_tol") {
      config.solver.kkt_tol = parse_double(key, value);
    } else if (key == "max_iters") {
      config.solver.max_iters = parse_int(key, value);
    } else if (key == "out_dir") {
      config.out_dir = value;
    } else if (key == "data") {
      config.data_files = split_list(value);
    } else if (key == "cpi_id") {
      config.cpi_id = value;
    } else if (key == "rebase") {
      config.rebase = parse_bool(key, value);
    } else if (key == "trim_placebos") {
      config.trim_placebos = parse_bool(key, value);
    } else if (key == "parallel") {
      config.parallel = parse_bool(key, value);
    } else if (key == "enforcement_start") {
      config.enforcement_start = parse_month(key, value);
    } else if (key == "event_months") {
      config.event_months.clear();
      for (const auto& m : split_list(value))
        config.event_months.push_back(parse_month(key, m));
    } else if (key == "event_note") {
      config.event_note = value;
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }

  // Semantic validation.
  if (config.treated_id.empty())
    throw ConfigError(source_name + ": missing required key 'treated_id'");
  if (config.donor_ids.empty())
    throw ConfigError(source_name + ": missing required key 'donor_ids'");

  const int given = (pre_start ? 1 : 0) + (pre_end ? 1 : 0) +
                    (treatment_start ? 1 : 0) + (eval_end ? 1 : 0);
  if (given != 0 && given != 4)
    throw ConfigError(source_name + ": study design needs all of pre_start, "
                      "pre_end, treatment_start, eval_end (or none for defaults)");
  if (given == 4)
    config.design = StudyDesign::make(*pre_start, *pre_end, *treatment_start,
                                      *eval_end);

  std::set<std::string> donor_set;
  for (const auto& id : config.donor_ids) {
    if (id == config.treated_id)
      throw ConfigError("config key 'donor_ids': treated unit '" +
                        config.treated_id + "' listed in donor pool");
    if (!donor_set.insert(id).second)
      throw ConfigError("config key 'donor_ids': duplicate id '" + id + "'");
  }

  if (config.tax_old < 0.0 || config.tax_old >= 1.0 || config.tax_new < 0.0 ||
      config.tax_new >= 1.0)
    throw ConfigError("config: tax rates must lie in [0, 1)");
  if (config.tax_old == config.tax_new)
    throw ConfigError("config: degenerate tax change (tax_old == tax_new)");
  if (config.solver.max_iters <= 0)
    throw ConfigError("config key 'max_iters': must be positive");
  if (config.solver.objective_tol <= 0.0 || config.solver.kkt_tol <= 0.0)
    throw ConfigError("config: solver tolerances must be positive");

  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  PipelineConfig config = parse_config(in, path.string());
  // Data paths are relative to the config file's directory.
  for (auto& file : config.data_files) {
    std::filesystem::path p(file);
    if (p.is_relative()) file = (path.parent_path() / p).string();
  }
  return config;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string canonical_config(const PipelineConfig& config) {
  std::ostringstream os;
  os << "treated_id=" << config.treated_id << '\n';
  os << "donor_ids=";
  for (std::size_t i = 0; i < config.donor_ids.size(); ++i)
    os << (i ? "," : "") << config.donor_ids[i];
  os << '\n';
  os << "pre_start=" << config.design.pre_start.str() << '\n';
  os << "pre_end=" << config.design.pre_end.str() << '\n';
  os << "treatment_start=" << config.design.treatment_start.str() << '\n';
  os << "eval_end=" << config.design.eval_end.str() << '\n';
  os << "tax_old=" << format_double(config.tax_old) << '\n';
  os << "tax_new=" << format_double(config.tax_new) << '\n';
  os << "objective_tol=" << format_double(config.solver.objective_tol) << '\n';
  os << "kkt_tol=" << format_double(config.solver.kkt_tol) << '\n';
  os << "max_iters=" << config.solver.max_iters << '\n';
  os << "cpi_id=" << (config.cpi_id ? *config.cpi_id : "") << '\n';
  os << "rebase=" << (config.rebase ? "true" : "false") << '\n';
  os << "trim_placebos=" << (config.trim_placebos ? "true" : "false") << '\n';
  os << "enforcement_start=" << config.enforcement().str() << '\n';
  os << "event_months=";
  for (std::size_t i = 0; i < config.event_months.size(); ++i)
    os << (i ? "," : "") << config.event_months[i].str();
  os << '\n';
  os << "event_note=" << config.event_note << '\n';
  return os.str();
}

std::string config_hash(const PipelineConfig& config) {
  const std::string canon = canonical_config(config);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace scm
