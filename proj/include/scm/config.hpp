#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scm/panel.hpp"

namespace scm {

struct SolverConfig {
  double objective_tol = 1e-10;
  double kkt_tol = 1e-7;
  int max_iters = 100000;
};

// Resolved pipeline configuration. Defaults encode the study this tool was
// built around: a 12-month fitting window 2022-11..2023-10, treatment dated
// at the 2023-11 announcement, evaluation through 2024-07, and the 7% -> 19%
// VAT step enforced from 2024-01.
struct PipelineConfig {
  std::string treated_id;
  std::vector<std::string> donor_ids;
  StudyDesign design = default_design();
  double tax_old = 0.07;
  double tax_new = 0.19;
  SolverConfig solver;
  std::string out_dir = "out";

  std::vector<std::string> data_files;     // resolved relative to the config
  std::optional<std::string> cpi_id;       // all-items index for the overview figure
  bool rebase = false;                     // rescale to 100 at pre_start
  bool trim_placebos = false;              // drop poor pre-fit placebo units
  bool parallel = true;                    // fan out refits across threads
  std::optional<MonthKey> enforcement_start;  // months before it are "anticipation"
  std::vector<MonthKey> event_months;      // annotated in the fit figure
  std::string event_note;

  // Anticipation window: [treatment_start, enforcement). With the default
  // design the enforcement month is 2024-01; for custom designs without an
  // explicit enforcement_start there is no anticipation window.
  MonthKey enforcement() const;
};

// Parses the flat key=value format (lowercase snake_case keys, '#'
// comments, comma-separated lists) and applies defaults. Unknown keys and
// semantic violations raise ConfigError naming the key.
PipelineConfig parse_config(std::istream& in, const std::string& source_name);
PipelineConfig load_config(const std::filesystem::path& path);

// Canonical serialization of a resolved config; input to the config hash.
std::string canonical_config(const PipelineConfig& config);

// FNV-1a 64 over the canonical form, as fixed-width hex.
std::string config_hash(const PipelineConfig& config);

}  // namespace scm
