#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scm/datagen.hpp"
#include "scm/error.hpp"
#include "scm/report.hpp"
#include "scm/util.hpp"

using namespace scm;
namespace fs = std::filesystem;

namespace {

const fs::path kSourceDir = SCM_SOURCE_DIR;
const fs::path kConfig = kSourceDir / "data" / "config.cfg";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PipelineConfig generated_config(const Panel& panel) {
  PipelineConfig config;
  config.treated_id = panel.treated.id();
  config.donor_ids = panel.donor_ids();
  config.design = panel.design;
  return config;
}

}  // namespace

TEST_CASE("pipeline on the bundled snapshot produces the full artifact set") {
  const fs::path out = fresh_dir("scm_report_bundle");
  ReportBundle bundle = run_pipeline(kConfig, {}, out.string());

  for (const char* name :
       {"figure1.csv", "figure2.csv", "figure3.csv", "figure4.csv",
        "figure1.svg", "figure2.svg", "figure3.svg", "figure4.svg",
        "weights.csv", "placebo_ranks.csv", "results.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(out / name));
  }

  // 21 table rows, anticipation flags on the announcement window.
  CHECK(bundle.rows.size() == 21);
  int anticipation = 0, pre = 0, treatment = 0;
  for (const auto& row : bundle.rows) {
    if (row.phase == "anticipation") ++anticipation;
    if (row.phase == "pre") ++pre;
    if (row.phase == "treatment") ++treatment;
  }
  CHECK(pre == 12);
  CHECK(anticipation == 2);
  CHECK(treatment == 7);

  // Rates and scenario line exist exactly on post months.
  for (const auto& row : bundle.rows) {
    CHECK(row.rate.has_value() == bundle.panel.design.is_post(row.month));
    CHECK(row.full_passthrough.has_value() ==
          bundle.panel.design.is_post(row.month));
  }

  // The event annotation tags 2024-06 and 2024-07 in the written table.
  std::ifstream fig2(out / "figure2.csv");
  std::string contents((std::istreambuf_iterator<char>(fig2)),
                       std::istreambuf_iterator<char>());
  CHECK(contents.find("2024-06") != std::string::npos);
  CHECK(contents.find("UEFA Euro 2024") != std::string::npos);
  CHECK(contents.rfind("month,actual,synthetic,full_passthrough,gap,"
                       "passthrough_rate,phase,note\n", 0) == 0);

  // results.json carries the donor list and the config hash.
  auto json = nlohmann::ordered_json::parse(read_file(out / "results.json"));
  CHECK(json["config_hash"] == bundle.hash);
  CHECK(json["config"]["donor_ids"].size() == 25);
  CHECK(json["placebo"]["treated_rank"] == bundle.placebo.treated_rank);

  fs::remove_all(out);
}

TEST_CASE("bundled data: the effect persists in every LOO variant") {
  const fs::path out = fresh_dir("scm_report_loo");
  ReportBundle bundle = run_pipeline(kConfig, {}, out.string());

  const MonthKey july{2024, 7};
  const double baseline = bundle.fit.gap.at(july);
  CHECK(bundle.loo.variants.size() ==
        bundle.fit.weights.support(1e-8).size());
  REQUIRE_FALSE(bundle.loo.variants.empty());
  for (const auto& [excluded, variant] : bundle.loo.variants) {
    CAPTURE(excluded);
    // Each refit stays within a few points of the baseline path and keeps
    // a clearly positive July effect.
    CHECK(std::abs(variant.gap.at(july) - baseline) < 3.0);
    CHECK(variant.gap.at(july) > 5.0);
  }
  fs::remove_all(out);
}

TEST_CASE("two runs write byte-identical CSV and SVG artifacts") {
  const fs::path out_a = fresh_dir("scm_report_rerun_a");
  const fs::path out_b = fresh_dir("scm_report_rerun_b");
  run_pipeline(kConfig, {}, out_a.string());
  run_pipeline(kConfig, {}, out_b.string());

  for (const char* name :
       {"figure1.csv", "figure2.csv", "figure3.csv", "figure4.csv",
        "figure1.svg", "figure2.svg", "figure3.svg", "figure4.svg",
        "weights.csv", "placebo_ranks.csv"}) {
    CAPTURE(name);
    CHECK(read_file(out_a / name) == read_file(out_b / name));
  }
  fs::remove_all(out_a);
  fs::remove_all(out_b);
}

TEST_CASE("a missing data file fails before any output is written") {
  const fs::path dir = fresh_dir("scm_report_atomic");
  const fs::path config_path = dir / "broken.cfg";
  {
    std::ofstream cfg(config_path);
    cfg << "treated_id = 11.11.1\n"
           "donor_ids = a, b\n"
           "data = nowhere.csv\n";
  }
  const fs::path out = dir / "out";
  CHECK_THROWS_AS(run_pipeline(config_path, {}, out.string()), IoError);
  CHECK_FALSE(fs::exists(out));
  fs::remove_all(dir);
}

TEST_CASE("zero-effect generated panel reports rates hovering around zero") {
  GenSpec spec;
  spec.donor_count = 8;
  spec.noise_sd = 0.2;
  spec.seed = 77;
  auto [panel, truth] = generate(spec);
  ReportBundle bundle = build_report(generated_config(panel), panel, {});

  for (const auto& row : bundle.rows) {
    if (!row.rate) continue;
    // Noise of a fraction of a point against an ~12.6-point full increase.
    CHECK(std::abs(*row.rate) < 0.15);
  }
}

TEST_CASE("rebase mode is applied and recorded") {
  GenSpec spec;
  spec.donor_count = 5;
  spec.noise_sd = 0.1;
  spec.seed = 31;
  auto [panel, truth] = generate(spec);

  PipelineConfig config = generated_config(panel);
  config.rebase = true;
  Panel rebased = rebase_panel(panel);
  ReportBundle bundle = build_report(config, rebased, {});

  CHECK(bundle.rows.front().actual == doctest::Approx(100.0));
  auto json = results_json(bundle);
  CHECK(json["config"]["rebase"] == true);
}

TEST_CASE("SVG output is structurally sound") {
  GenSpec spec;
  spec.donor_count = 4;
  spec.noise_sd = 0.2;
  spec.seed = 3;
  auto [panel, truth] = generate(spec);
  ReportBundle bundle = build_report(generated_config(panel), panel, {});

  for (const std::string svg : {figure2_svg(bundle), figure3_svg(bundle),
                                figure4_svg(bundle)}) {
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") !=
          std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
}

TEST_CASE("atomic writer leaves no temp file behind") {
  const fs::path dir = fresh_dir("scm_atomic_write");
  write_file_atomic(dir / "x.txt", "payload");
  CHECK(read_file(dir / "x.txt") == "payload");
  CHECK_FALSE(fs::exists(dir / "x.txt.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("fixed formatting helpers") {
  CHECK(format_fixed(1.23456, 4) == "1.2346");
  CHECK(format_fixed(-0.000001, 4) == "0.0000");
  CHECK(format_fixed(8.0, 4) == "8.0000");
  CHECK(format_sig(0.311234, 6) == "0.311234");
  CHECK(format_sig(0.5821, 6) == "0.5821");
  CHECK(format_sig(123456.789, 6) == "123457");
}
