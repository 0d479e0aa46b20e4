#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scm/config.hpp"
#include "scm/inference.hpp"
#include "scm/ingest.hpp"
#include "scm/passthrough.hpp"

namespace scm {

inline constexpr const char* kToolName = "vatscm";
inline constexpr const char* kToolVersion = "0.1.0";

// One row of the monthly results table.
struct MonthlyRow {
  MonthKey month;
  double actual = 0.0;
  double synthetic = 0.0;
  std::optional<double> full_passthrough;  // from treatment_start
  double gap = 0.0;
  std::optional<double> rate;              // from treatment_start
  std::optional<double> effect_percent;    // from treatment_start
  std::string phase;                       // pre | anticipation | treatment
  std::string note;                        // event annotation, usually empty
};

// Everything the pipeline publishes: fit, monthly table, robustness
// results, and run metadata.
struct ReportBundle {
  PipelineConfig config;
  Panel panel;
  std::optional<PriceSeries> cpi;
  ScmFit fit;
  std::vector<MonthlyRow> rows;
  LooResult loo;
  PlaceboResult placebo;
  std::string hash;
  std::string version;
  std::string generated_at;
};

// Computes the full pipeline on an assembled panel.
ReportBundle build_report(const PipelineConfig& config, const Panel& panel,
                          std::optional<PriceSeries> cpi);

// Loads config and data, computes, and writes every artifact under
// config.out_dir. All computation happens before the first write and each
// file is written atomically, so failures never leave partial output.
ReportBundle run_pipeline(const std::filesystem::path& config_path,
                          const std::vector<std::string>& extra_data = {},
                          const std::optional<std::string>& out_dir_override = {});

void write_report_files(const ReportBundle& bundle,
                        const std::filesystem::path& out_dir);

// Deterministic CSV renderings (index points at 4 decimals, rates at 6
// significant digits).
std::string figure1_csv(const ReportBundle& bundle);
std::string figure2_csv(const ReportBundle& bundle);
std::string figure3_csv(const ReportBundle& bundle);
std::string figure4_csv(const ReportBundle& bundle);
std::string weights_csv(const ReportBundle& bundle);
std::string placebo_ranks_csv(const ReportBundle& bundle);

std::string figure1_svg(const ReportBundle& bundle);
std::string figure2_svg(const ReportBundle& bundle);
std::string figure3_svg(const ReportBundle& bundle);
std::string figure4_svg(const ReportBundle& bundle);

nlohmann::ordered_json results_json(const ReportBundle& bundle);

// Canonical JSON forms used by the determinism tests.
nlohmann::ordered_json to_json(const ScmFit& fit);
nlohmann::ordered_json to_json(const LooResult& result);
nlohmann::ordered_json to_json(const PlaceboResult& result);

}  // namespace scm
