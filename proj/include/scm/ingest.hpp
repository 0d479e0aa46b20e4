#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scm/config.hpp"
#include "scm/csv.hpp"

namespace scm {

// Loads and merges the CSV files, then assembles the validated panel for
// the configured treated unit and donor pool. Duplicate (id, month) rows
// across files are rejected like duplicates within one file.
Panel load_panel(const std::vector<std::string>& csv_paths,
                 const PipelineConfig& config);

// The configured all-items series, when present in both config and data.
std::optional<PriceSeries> load_cpi_series(
    const std::vector<std::string>& csv_paths, const PipelineConfig& config);

// Merged raw content of several wire files.
std::map<std::string, RawSeries> read_price_csv_files(
    const std::vector<std::string>& csv_paths);

}  // namespace scm
