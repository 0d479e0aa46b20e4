#include "scm/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scm/error.hpp"
#include "scm/svg.hpp"
#include "scm/util.hpp"

namespace scm {

namespace {

std::string fmt_points(double v) { return format_fixed(v, 4); }
std::string fmt_rate(double v) { return format_sig(v, 6); }

std::vector<std::string> month_labels(const StudyDesign& design) {
  std::vector<std::string> labels;
  for (MonthKey m : design.months()) labels.push_back(m.str());
  return labels;
}

int month_index(const StudyDesign& design, MonthKey m) {
  return month_diff(design.pre_start, m);
}

}  // namespace

ReportBundle build_report(const PipelineConfig& config, const Panel& panel,
                          std::optional<PriceSeries> cpi) {
  ReportBundle bundle;
  bundle.config = config;
  bundle.panel = panel;
  bundle.cpi = std::move(cpi);
  bundle.version = kToolVersion;
  bundle.hash = config_hash(config);

  FitOptions fit_opts;
  fit_opts.objective_tol = config.solver.objective_tol;
  fit_opts.kkt_tol = config.solver.kkt_tol;
  fit_opts.max_iters = config.solver.max_iters;

  InferenceOptions inf_opts;
  inf_opts.fit = fit_opts;
  inf_opts.parallel = config.parallel;
  inf_opts.trim_poor_prefit = config.trim_placebos;

  bundle.fit = fit_weights(panel, fit_opts);
  bundle.loo = leave_one_out(panel, inf_opts);
  bundle.placebo = placebo_test(panel, inf_opts);

  const TaxChange tax(config.tax_old, config.tax_new);
  const StudyDesign& design = panel.design;
  const MonthKey enforcement = config.enforcement();
  const PriceSeries full = full_passthrough_series(bundle.fit, tax, design);
  const PassThroughSeries rates = passthrough_series(bundle.fit, tax, design);

  for (MonthKey m : design.months()) {
    MonthlyRow row;
    row.month = m;
    row.synthetic = bundle.fit.synthetic.at(m);
    row.gap = bundle.fit.gap.at(m);
    row.actual = panel.treated.at(m);
    if (design.is_post(m)) {
      row.full_passthrough = full.at(m);
      row.rate = rates.rates.at(m);
      row.effect_percent = treatment_effect(bundle.fit, m, design).percent;
      row.phase = m < enforcement ? "anticipation" : "treatment";
    } else {
      row.phase = "pre";
    }
    for (MonthKey event : config.event_months) {
      if (event == m) row.note = config.event_note;
    }
    bundle.rows.push_back(std::move(row));
  }

  bundle.generated_at = iso_timestamp_utc();
  return bundle;
}

ReportBundle run_pipeline(const std::filesystem::path& config_path,
                          const std::vector<std::string>& extra_data,
                          const std::optional<std::string>& out_dir_override) {
  PipelineConfig config = load_config(config_path);
  if (out_dir_override) config.out_dir = *out_dir_override;

  std::vector<std::string> data_files = config.data_files;
  data_files.insert(data_files.end(), extra_data.begin(), extra_data.end());
  if (data_files.empty())
    throw ConfigError("no data files: set 'data' in the config or pass --data");

  const auto raw = read_price_csv_files(data_files);
  Panel panel =
      assemble_panel(raw, config.treated_id, config.donor_ids, config.design);
  if (config.rebase) panel = rebase_panel(panel);

  std::optional<PriceSeries> cpi;
  if (config.cpi_id && raw.count(*config.cpi_id)) {
    cpi = extract_series(raw, *config.cpi_id, config.design);
    if (config.rebase) cpi = rebase_to(*cpi, config.design.pre_start);
  }

  ReportBundle bundle = build_report(config, panel, std::move(cpi));
  write_report_files(bundle, config.out_dir);
  return bundle;
}

void write_report_files(const ReportBundle& bundle,
                        const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + out_dir.string() +
                  "': " + ec.message());

  if (bundle.cpi) {
    write_file_atomic(out_dir / "figure1.csv", figure1_csv(bundle));
    write_file_atomic(out_dir / "figure1.svg", figure1_svg(bundle));
  }
  write_file_atomic(out_dir / "figure2.csv", figure2_csv(bundle));
  write_file_atomic(out_dir / "figure2.svg", figure2_svg(bundle));
  write_file_atomic(out_dir / "figure3.csv", figure3_csv(bundle));
  write_file_atomic(out_dir / "figure3.svg", figure3_svg(bundle));
  write_file_atomic(out_dir / "figure4.csv", figure4_csv(bundle));
  write_file_atomic(out_dir / "figure4.svg", figure4_svg(bundle));
  write_file_atomic(out_dir / "weights.csv", weights_csv(bundle));
  write_file_atomic(out_dir / "placebo_ranks.csv", placebo_ranks_csv(bundle));
  write_file_atomic(out_dir / "results.json", results_json(bundle).dump(2) + "\n");
}

std::string figure1_csv(const ReportBundle& bundle) {
  std::ostringstream os;
  os << "month,treated,cpi\n";
  for (const auto& row : bundle.rows) {
    os << row.month.str() << ',' << fmt_points(row.actual) << ','
       << (bundle.cpi ? fmt_points(bundle.cpi->at(row.month)) : "") << '\n';
  }
  return os.str();
}

std::string figure2_csv(const ReportBundle& bundle) {
  std::ostringstream os;
  os << "month,actual,synthetic,full_passthrough,gap,passthrough_rate,phase,note\n";
  for (const auto& row : bundle.rows) {
    os << row.month.str() << ',' << fmt_points(row.actual) << ','
       << fmt_points(row.synthetic) << ','
       << (row.full_passthrough ? fmt_points(*row.full_passthrough) : "") << ','
       << fmt_points(row.gap) << ',' << (row.rate ? fmt_rate(*row.rate) : "")
       << ',' << row.phase << ',' << row.note << '\n';
  }
  return os.str();
}

std::string figure3_csv(const ReportBundle& bundle) {
  std::ostringstream os;
  os << "month,gap,loo_min,loo_max\n";
  for (const auto& row : bundle.rows) {
    const auto& band = bundle.loo.band.at(row.month);
    os << row.month.str() << ',' << fmt_points(row.gap) << ','
       << fmt_points(band.first) << ',' << fmt_points(band.second) << '\n';
  }
  return os.str();
}

std::string figure4_csv(const ReportBundle& bundle) {
  std::ostringstream os;
  os << "month," << bundle.panel.treated.id();
  std::vector<std::string> ids;
  for (const auto& [id, fit] : bundle.placebo.placebo_fits) {
    (void)fit;
    ids.push_back(id);
  }
  for (const auto& id : ids) os << ',' << id;
  os << '\n';
  for (const auto& row : bundle.rows) {
    os << row.month.str() << ',' << fmt_points(row.gap);
    for (const auto& id : ids)
      os << ',' << fmt_points(bundle.placebo.placebo_fits.at(id).gap.at(row.month));
    os << '\n';
  }
  return os.str();
}

std::string weights_csv(const ReportBundle& bundle) {
  std::ostringstream os;
  os << "donor_id,weight\n";
  for (const auto& [id, w] : bundle.fit.weights.map())
    os << id << ',' << fmt_rate(w) << '\n';
  return os.str();
}

std::string placebo_ranks_csv(const ReportBundle& bundle) {
  std::ostringstream os;
  os << "rank,unit_id,pre_rmspe,post_rmspe,ratio,flagged\n";
  int rank = 1;
  for (const auto& id : bundle.placebo.ranking) {
    const bool flagged =
        std::find(bundle.placebo.flagged.begin(), bundle.placebo.flagged.end(),
                  id) != bundle.placebo.flagged.end();
    os << rank++ << ',' << id << ',' << fmt_rate(bundle.placebo.pre_rmspe.at(id))
       << ',' << fmt_rate(bundle.placebo.post_rmspe.at(id)) << ','
       << fmt_rate(bundle.placebo.ratios.at(id)) << ','
       << (flagged ? "yes" : "") << '\n';
  }
  return os.str();
}

std::string figure1_svg(const ReportBundle& bundle) {
  const StudyDesign& design = bundle.panel.design;
  LineChart chart("Treated series vs all-items index", month_labels(design));
  std::vector<std::optional<double>> treated, cpi;
  for (const auto& row : bundle.rows) {
    treated.push_back(row.actual);
    cpi.push_back(bundle.cpi ? std::optional<double>(bundle.cpi->at(row.month))
                             : std::nullopt);
  }
  chart.add_series(bundle.panel.treated.label(), treated, "#1a1a1a");
  if (bundle.cpi) chart.add_series(bundle.cpi->label(), cpi, "#888888", "6,3");
  chart.add_vline(month_index(design, design.pre_end), "pre-period end");
  return chart.render();
}

std::string figure2_svg(const ReportBundle& bundle) {
  const StudyDesign& design = bundle.panel.design;
  LineChart chart("Actual vs synthetic and full pass-through",
                  month_labels(design));
  std::vector<std::optional<double>> actual, synthetic, full;
  for (const auto& row : bundle.rows) {
    actual.push_back(row.actual);
    synthetic.push_back(row.synthetic);
    full.push_back(row.full_passthrough
                       ? std::optional<double>(*row.full_passthrough)
                       : std::nullopt);
  }
  chart.add_series("actual", actual, "#1a1a1a");
  chart.add_series("synthetic", synthetic, "#c0392b", "3,3");
  chart.add_series("full pass-through", full, "#2b6cb0", "9,4");
  chart.add_vline(month_index(design, design.treatment_start), "treatment start");

  const MonthKey enforcement = bundle.config.enforcement();
  for (const auto& row : bundle.rows) {
    if (row.rate && row.month >= enforcement) {
      chart.add_point_label(month_index(design, row.month), row.actual,
                            format_fixed(*row.rate * 100.0, 1) + "%");
    }
  }

  // Event window annotation (metadata only; nothing is modeled).
  std::vector<MonthKey> events = bundle.config.event_months;
  std::sort(events.begin(), events.end());
  std::vector<MonthKey> in_window;
  for (MonthKey m : events)
    if (m >= design.pre_start && m <= design.eval_end) in_window.push_back(m);
  if (!in_window.empty()) {
    chart.add_span(month_index(design, in_window.front()),
                   month_index(design, in_window.back()),
                   bundle.config.event_note);
  }
  return chart.render();
}

std::string figure3_svg(const ReportBundle& bundle) {
  const StudyDesign& design = bundle.panel.design;
  LineChart chart("Gap and leave-one-out band", month_labels(design));
  std::vector<std::optional<double>> gap;
  std::vector<std::optional<std::pair<double, double>>> band;
  for (const auto& row : bundle.rows) {
    gap.push_back(row.gap);
    band.push_back(bundle.loo.band.at(row.month));
  }
  chart.add_band("leave-one-out range", band, "#74a3d4");
  chart.add_series("gap (actual - synthetic)", gap, "#1a1a1a");
  chart.add_vline(month_index(design, design.treatment_start), "treatment start");
  return chart.render();
}

std::string figure4_svg(const ReportBundle& bundle) {
  const StudyDesign& design = bundle.panel.design;
  LineChart chart("Gap vs placebo gaps", month_labels(design));
  std::vector<std::optional<double>> gap;
  for (const auto& row : bundle.rows) gap.push_back(row.gap);
  bool named = false;
  for (const auto& [id, fit] : bundle.placebo.placebo_fits) {
    std::vector<std::optional<double>> line;
    for (const auto& row : bundle.rows) line.push_back(fit.gap.at(row.month));
    chart.add_series(named ? "" : "placebo units", line, "#bbbbbb");
    named = true;
  }
  chart.add_series("treated unit", gap, "#1a1a1a");
  chart.add_vline(month_index(design, design.treatment_start), "treatment start");
  return chart.render();
}

nlohmann::ordered_json to_json(const ScmFit& fit) {
  nlohmann::ordered_json j;
  j["weights"] = fit.weights.map();
  j["pre_rmspe"] = fit.pre_rmspe;
  j["objective_value"] = fit.objective_value;
  nlohmann::ordered_json gap;
  for (const auto& [m, g] : fit.gap) gap[m.str()] = g;
  j["gap"] = std::move(gap);
  j["diagnostics"] = {{"iterations", fit.diagnostics.iterations},
                      {"polish_steps", fit.diagnostics.polish_steps},
                      {"kkt_residual", fit.diagnostics.kkt_residual},
                      {"converged", fit.diagnostics.converged}};
  return j;
}

nlohmann::ordered_json to_json(const LooResult& result) {
  nlohmann::ordered_json j;
  j["baseline"] = to_json(result.baseline);
  nlohmann::ordered_json variants;
  for (const auto& [id, fit] : result.variants) variants[id] = to_json(fit);
  j["variants"] = std::move(variants);
  nlohmann::ordered_json band;
  for (const auto& [m, range] : result.band)
    band[m.str()] = {{"min", range.first}, {"max", range.second}};
  j["band"] = std::move(band);
  return j;
}

nlohmann::ordered_json to_json(const PlaceboResult& result) {
  nlohmann::ordered_json j;
  j["treated_fit"] = to_json(result.treated_fit);
  nlohmann::ordered_json fits;
  for (const auto& [id, fit] : result.placebo_fits) fits[id] = to_json(fit);
  j["placebo_fits"] = std::move(fits);
  j["pre_rmspe"] = result.pre_rmspe;
  j["post_rmspe"] = result.post_rmspe;
  nlohmann::ordered_json ratios;
  for (const auto& [id, r] : result.ratios) {
    if (std::isinf(r)) {
      ratios[id] = "inf";
    } else {
      ratios[id] = r;
    }
  }
  j["ratios"] = std::move(ratios);
  j["ranking"] = result.ranking;
  j["treated_rank"] = result.treated_rank;
  j["flagged"] = result.flagged;
  j["failures"] = result.failures;
  return j;
}

nlohmann::ordered_json results_json(const ReportBundle& bundle) {
  nlohmann::ordered_json j;
  j["tool"] = {{"name", kToolName}, {"version", bundle.version}};
  j["generated_at"] = bundle.generated_at;
  j["config_hash"] = bundle.hash;

  nlohmann::ordered_json config;
  config["treated_id"] = bundle.config.treated_id;
  config["donor_ids"] = bundle.config.donor_ids;
  config["design"] = {{"pre_start", bundle.config.design.pre_start.str()},
                      {"pre_end", bundle.config.design.pre_end.str()},
                      {"treatment_start", bundle.config.design.treatment_start.str()},
                      {"eval_end", bundle.config.design.eval_end.str()}};
  config["tax_old"] = bundle.config.tax_old;
  config["tax_new"] = bundle.config.tax_new;
  config["rebase"] = bundle.config.rebase;
  config["trim_placebos"] = bundle.config.trim_placebos;
  config["enforcement_start"] = bundle.config.enforcement().str();
  j["config"] = std::move(config);

  j["fit"] = to_json(bundle.fit);

  nlohmann::ordered_json months = nlohmann::ordered_json::array();
  for (const auto& row : bundle.rows) {
    nlohmann::ordered_json r;
    r["month"] = row.month.str();
    r["actual"] = row.actual;
    r["synthetic"] = row.synthetic;
    r["full_passthrough"] =
        row.full_passthrough ? nlohmann::ordered_json(*row.full_passthrough)
                             : nlohmann::ordered_json(nullptr);
    r["gap"] = row.gap;
    r["passthrough_rate"] = row.rate ? nlohmann::ordered_json(*row.rate)
                                     : nlohmann::ordered_json(nullptr);
    r["effect_percent"] = row.effect_percent
                              ? nlohmann::ordered_json(*row.effect_percent)
                              : nlohmann::ordered_json(nullptr);
    r["phase"] = row.phase;
    r["note"] = row.note;
    months.push_back(std::move(r));
  }
  j["months"] = std::move(months);

  nlohmann::ordered_json loo;
  nlohmann::ordered_json loo_variants;
  for (const auto& [id, fit] : bundle.loo.variants) {
    loo_variants[id] = {{"pre_rmspe", fit.pre_rmspe},
                        {"final_gap", fit.gap.at(bundle.panel.design.eval_end)}};
  }
  loo["excluded_donors"] = [&] {
    std::vector<std::string> ids;
    for (const auto& [id, fit] : bundle.loo.variants) {
      (void)fit;
      ids.push_back(id);
    }
    return ids;
  }();
  loo["variants"] = std::move(loo_variants);
  j["loo"] = std::move(loo);

  nlohmann::ordered_json placebo;
  placebo["treated_rank"] = bundle.placebo.treated_rank;
  placebo["ranking"] = bundle.placebo.ranking;
  nlohmann::ordered_json ratios;
  for (const auto& [id, r] : bundle.placebo.ratios)
    ratios[id] = std::isinf(r) ? nlohmann::ordered_json("inf")
                               : nlohmann::ordered_json(r);
  placebo["ratios"] = std::move(ratios);
  placebo["flagged"] = bundle.placebo.flagged;
  placebo["failures"] = bundle.placebo.failures;
  j["placebo"] = std::move(placebo);

  return j;
}

}  // namespace scm
