#include "scm/ingest.hpp"

#include "scm/error.hpp"

namespace scm {

std::map<std::string, RawSeries> read_price_csv_files(
    const std::vector<std::string>& csv_paths) {
  if (csv_paths.empty()) throw ConfigError("no data files given");
  std::map<std::string, RawSeries> merged;
  for (const auto& path : csv_paths) {
    std::map<std::string, RawSeries> one = read_price_csv_file(path);
    for (auto& [id, series] : one) {
      RawSeries& target = merged[id];
      if (target.label.empty()) target.label = series.label;
      for (const auto& [month, value] : series.obs) {
        if (!target.obs.emplace(month, value).second)
          throw DataError(path + ": duplicate row for series '" + id + "' at " +
                          month.str() + " (already loaded from another file)");
      }
    }
  }
  return merged;
}

Panel load_panel(const std::vector<std::string>& csv_paths,
                 const PipelineConfig& config) {
  const auto raw = read_price_csv_files(csv_paths);
  Panel panel =
      assemble_panel(raw, config.treated_id, config.donor_ids, config.design);
  if (config.rebase) panel = rebase_panel(panel);
  return panel;
}

std::optional<PriceSeries> load_cpi_series(
    const std::vector<std::string>& csv_paths, const PipelineConfig& config) {
  if (!config.cpi_id) return std::nullopt;
  const auto raw = read_price_csv_files(csv_paths);
  if (raw.find(*config.cpi_id) == raw.end()) return std::nullopt;
  PriceSeries series = extract_series(raw, *config.cpi_id, config.design);
  if (config.rebase) series = rebase_to(series, config.design.pre_start);
  return series;
}

}  // namespace scm
