// Command-line front end: fit | placebo | loo | gen | report.
//
// Exit codes: 0 success, 1 data/config error, 2 solver non-convergence,
// 3 I/O error. Errors are also emitted machine-readable on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "scm/datagen.hpp"
#include "scm/error.hpp"
#include "scm/inference.hpp"
#include "scm/ingest.hpp"
#include "scm/report.hpp"
#include "scm/util.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> data_files;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool config_required) {
  auto* config = cmd->add_option("--config", args->config_path,
                                 "pipeline configuration file");
  if (config_required) config->required();
  cmd->add_option("--data", args->data_files,
                  "price CSV file(s), appended to the config's data list");
  cmd->add_option("--out", args->out_dir, "output directory");
}

// Resolves config and panel. Without --config, the data must contain a
// series named TREATED (the generator's convention); all other series act
// as donors under the default study design.
std::pair<scm::PipelineConfig, scm::Panel> resolve_panel(const CommonArgs& args) {
  scm::PipelineConfig config;
  if (!args.config_path.empty()) {
    config = scm::load_config(args.config_path);
    config.data_files.insert(config.data_files.end(), args.data_files.begin(),
                             args.data_files.end());
  } else {
    if (args.data_files.empty())
      throw scm::ConfigError("no input: pass --config and/or --data");
    config.data_files = args.data_files;
    const auto raw = scm::read_price_csv_files(config.data_files);
    if (raw.find("TREATED") == raw.end())
      throw scm::ConfigError(
          "no series 'TREATED' in the data; pass --config to name the "
          "treated unit and donor pool");
    config.treated_id = "TREATED";
    for (const auto& [id, series] : raw) {
      (void)series;
      if (id != "TREATED") config.donor_ids.push_back(id);
    }
  }
  if (config.data_files.empty())
    throw scm::ConfigError("no data files: set 'data' in the config or pass --data");
  scm::Panel panel = scm::load_panel(config.data_files, config);
  return {std::move(config), std::move(panel)};
}

scm::FitOptions fit_options(const scm::PipelineConfig& config) {
  scm::FitOptions opts;
  opts.objective_tol = config.solver.objective_tol;
  opts.kkt_tol = config.solver.kkt_tol;
  opts.max_iters = config.solver.max_iters;
  return opts;
}

void print_fit_summary(const scm::PipelineConfig& config, const scm::ScmFit& fit) {
  std::cout << "treated: " << config.treated_id << "\n";
  std::cout << "donors:  " << config.donor_ids.size() << "\n";
  std::cout << "pre_rmspe: " << scm::format_sig(fit.pre_rmspe, 6)
            << "  objective: " << scm::format_sig(fit.objective_value, 6)
            << "  kkt: " << scm::format_sig(fit.diagnostics.kkt_residual, 3)
            << "\n";
  std::cout << "weights (> 1e-4):\n";
  for (const auto& [id, w] : fit.weights.map()) {
    if (w > 1e-4)
      std::cout << "  " << id << "  " << scm::format_sig(w, 6) << "\n";
  }
}

int cmd_gen(std::uint64_t seed, const std::string& out_path, int donors,
            double noise_sd, double effect) {
  scm::GenSpec spec;
  spec.seed = seed;
  spec.donor_count = donors;
  spec.noise_sd = noise_sd;
  if (effect != 0.0) {
    const scm::StudyDesign design = spec.design();
    for (scm::MonthKey m : design.post_window()) spec.effect[m] = effect;
  }
  auto [panel, truth] = scm::generate(spec);
  scm::write_panel_csv_file(out_path, panel);
  std::cout << "wrote " << out_path << " (" << panel.donors.size()
            << " donors, " << panel.design.total_months() << " months, seed "
            << seed << ")\n";
  std::cout << "true weights:\n";
  for (const auto& [id, w] : truth.weights.map())
    if (w > 0.0) std::cout << "  " << id << "  " << scm::format_sig(w, 6) << "\n";
  return 0;
}

int cmd_fit(const CommonArgs& args) {
  auto [config, panel] = resolve_panel(args);
  scm::ScmFit fit = scm::fit_weights(panel, fit_options(config));
  print_fit_summary(config, fit);

  if (!args.out_dir.empty()) {
    std::filesystem::create_directories(args.out_dir);
    std::ostringstream weights;
    weights << "donor_id,weight\n";
    for (const auto& [id, w] : fit.weights.map())
      weights << id << ',' << scm::format_sig(w, 6) << '\n';
    scm::write_file_atomic(std::filesystem::path(args.out_dir) / "weights.csv",
                           weights.str());

    std::ostringstream series;
    series << "month,actual,synthetic,gap\n";
    for (scm::MonthKey m : panel.design.months()) {
      series << m.str() << ',' << scm::format_fixed(panel.treated.at(m), 4)
             << ',' << scm::format_fixed(fit.synthetic.at(m), 4) << ','
             << scm::format_fixed(fit.gap.at(m), 4) << '\n';
    }
    scm::write_file_atomic(std::filesystem::path(args.out_dir) / "fit.csv",
                           series.str());
    std::cout << "wrote " << args.out_dir << "/weights.csv and fit.csv\n";
  }
  return 0;
}

int cmd_loo(const CommonArgs& args) {
  auto [config, panel] = resolve_panel(args);
  scm::InferenceOptions opts;
  opts.fit = fit_options(config);
  opts.parallel = config.parallel;
  scm::LooResult loo = scm::leave_one_out(panel, opts);

  std::cout << "baseline pre_rmspe: " << scm::format_sig(loo.baseline.pre_rmspe, 6)
            << "\n";
  std::cout << "variants (excluded donor -> pre_rmspe, final gap):\n";
  for (const auto& [id, fit] : loo.variants) {
    std::cout << "  " << id << "  " << scm::format_sig(fit.pre_rmspe, 6) << "  "
              << scm::format_fixed(fit.gap.at(panel.design.eval_end), 4) << "\n";
  }

  if (!args.out_dir.empty()) {
    std::filesystem::create_directories(args.out_dir);
    std::ostringstream os;
    os << "month,gap,loo_min,loo_max\n";
    for (scm::MonthKey m : panel.design.months()) {
      const auto& band = loo.band.at(m);
      os << m.str() << ',' << scm::format_fixed(loo.baseline.gap.at(m), 4) << ','
         << scm::format_fixed(band.first, 4) << ','
         << scm::format_fixed(band.second, 4) << '\n';
    }
    scm::write_file_atomic(std::filesystem::path(args.out_dir) / "figure3.csv",
                           os.str());
    std::cout << "wrote " << args.out_dir << "/figure3.csv\n";
  }
  return 0;
}

int cmd_placebo(const CommonArgs& args) {
  auto [config, panel] = resolve_panel(args);
  scm::InferenceOptions opts;
  opts.fit = fit_options(config);
  opts.parallel = config.parallel;
  opts.trim_poor_prefit = config.trim_placebos;
  scm::PlaceboResult placebo = scm::placebo_test(panel, opts);

  std::cout << "rank,unit_id,ratio\n";
  int rank = 1;
  for (const auto& id : placebo.ranking) {
    const double ratio = placebo.ratios.at(id);
    std::cout << rank++ << ',' << id << ','
              << (std::isinf(ratio) ? "inf" : scm::format_sig(ratio, 6)) << "\n";
  }
  std::cout << "treated rank: " << placebo.treated_rank << " of "
            << placebo.ranking.size() << "\n";

  if (!args.out_dir.empty()) {
    std::filesystem::create_directories(args.out_dir);
    std::ostringstream ranks;
    ranks << "rank,unit_id,pre_rmspe,post_rmspe,ratio\n";
    rank = 1;
    for (const auto& id : placebo.ranking) {
      const double ratio = placebo.ratios.at(id);
      ranks << rank++ << ',' << id << ','
            << scm::format_sig(placebo.pre_rmspe.at(id), 6) << ','
            << scm::format_sig(placebo.post_rmspe.at(id), 6) << ','
            << (std::isinf(ratio) ? "inf" : scm::format_sig(ratio, 6)) << '\n';
    }
    scm::write_file_atomic(
        std::filesystem::path(args.out_dir) / "placebo_ranks.csv", ranks.str());

    std::ostringstream gaps;
    gaps << "month," << panel.treated.id();
    for (const auto& [id, fit] : placebo.placebo_fits) {
      (void)fit;
      gaps << ',' << id;
    }
    gaps << '\n';
    for (scm::MonthKey m : panel.design.months()) {
      gaps << m.str() << ','
           << scm::format_fixed(placebo.treated_fit.gap.at(m), 4);
      for (const auto& [id, fit] : placebo.placebo_fits)
        gaps << ',' << scm::format_fixed(fit.gap.at(m), 4);
      gaps << '\n';
    }
    scm::write_file_atomic(std::filesystem::path(args.out_dir) / "figure4.csv",
                           gaps.str());
    std::cout << "wrote " << args.out_dir << "/placebo_ranks.csv and figure4.csv\n";
  }
  return 0;
}

int cmd_report(const CommonArgs& args) {
  std::optional<std::string> out_override;
  if (!args.out_dir.empty()) out_override = args.out_dir;
  scm::ReportBundle bundle =
      scm::run_pipeline(args.config_path, args.data_files, out_override);

  std::cout << "config hash: " << bundle.hash << "\n";
  std::cout << "donor pool (" << bundle.config.donor_ids.size() << "):";
  for (const auto& id : bundle.config.donor_ids) std::cout << ' ' << id;
  std::cout << "\n";
  print_fit_summary(bundle.config, bundle.fit);
  for (const auto& row : bundle.rows) {
    if (!row.rate) continue;
    std::cout << row.month.str() << "  gap " << scm::format_fixed(row.gap, 2)
              << "  pass-through " << scm::format_fixed(*row.rate * 100.0, 1)
              << "%" << (row.phase == "anticipation" ? "  (anticipation)" : "")
              << "\n";
  }
  std::cout << "placebo: treated rank " << bundle.placebo.treated_rank << " of "
            << bundle.placebo.ranking.size() << "\n";
  std::cout << "outputs in " << bundle.config.out_dir << "\n";
  return 0;
}

int report_error(const char* type, const std::exception& e, int code) {
  nlohmann::json j;
  j["error"] = {{"type", type}, {"message", e.what()}};
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic-control estimation of tax pass-through"};
  app.require_subcommand(1);

  CommonArgs fit_args, loo_args, placebo_args, report_args;
  std::uint64_t seed = 42;
  std::string gen_out;
  int gen_donors = 25;
  double gen_noise = 0.3;
  double gen_effect = 0.0;

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic panel CSV");
  gen->add_option("--seed", seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output CSV path")->required();
  gen->add_option("--donors", gen_donors, "donor count")->capture_default_str();
  gen->add_option("--noise-sd", gen_noise, "noise standard deviation")
      ->capture_default_str();
  gen->add_option("--effect", gen_effect,
                  "index points added to the treated unit post-treatment")
      ->capture_default_str();

  CLI::App* fit = app.add_subcommand("fit", "fit the synthetic control weights");
  add_common(fit, &fit_args, false);

  CLI::App* loo = app.add_subcommand("loo", "leave-one-out robustness refits");
  add_common(loo, &loo_args, false);

  CLI::App* placebo =
      app.add_subcommand("placebo", "in-space placebo test with RMSPE ranking");
  add_common(placebo, &placebo_args, false);

  CLI::App* report =
      app.add_subcommand("report", "full pipeline: fit, robustness, artifacts");
  add_common(report, &report_args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage text
    return 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(seed, gen_out, gen_donors, gen_noise, gen_effect);
    if (fit->parsed()) return cmd_fit(fit_args);
    if (loo->parsed()) return cmd_loo(loo_args);
    if (placebo->parsed()) return cmd_placebo(placebo_args);
    if (report->parsed()) return cmd_report(report_args);
  } catch (const scm::SolverError& e) {
    return report_error("solver", e, 2);
  } catch (const scm::IoError& e) {
    return report_error("io", e, 3);
  } catch (const scm::ConfigError& e) {
    return report_error("config", e, 1);
  } catch (const scm::DataError& e) {
    return report_error("data", e, 1);
  } catch (const scm::Error& e) {
    return report_error("error", e, 1);
  } catch (const std::exception& e) {
    return report_error("internal", e, 1);
  }
  return 0;
}
