#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scm/datagen.hpp"
#include "scm/error.hpp"
#include "scm/ingest.hpp"

using namespace scm;

namespace {

// 26 series x 21 months in wire format: treated "11111" plus donors
// "d01".."d25", full default window.
std::string study_sized_csv() {
  std::ostringstream os;
  os << "series_id,label,month,value\n";
  auto emit = [&](const std::string& id, double base) {
    MonthKey m{2022, 11};
    for (int i = 0; i < 21; ++i, m = successor(m))
      os << id << ",series " << id << "," << m.str() << ',' << base + 0.5 * i
         << '\n';
  };
  emit("11111", 110.0);
  for (int j = 1; j <= 25; ++j) {
    char id[8];
    std::snprintf(id, sizeof(id), "d%02d", j);
    emit(id, 95.0 + j);
  }
  return os.str();
}

std::vector<std::string> study_donors() {
  std::vector<std::string> ids;
  for (int j = 1; j <= 25; ++j) {
    char id[8];
    std::snprintf(id, sizeof(id), "d%02d", j);
    ids.push_back(id);
  }
  return ids;
}

PipelineConfig study_config() {
  std::stringstream cfg;
  cfg << "treated_id = 11111\ndonor_ids = ";
  const auto donors = study_donors();
  for (std::size_t i = 0; i < donors.size(); ++i)
    cfg << (i ? ", " : "") << donors[i];
  cfg << "\n";
  return parse_config(cfg, "test");
}

}  // namespace

TEST_CASE("minimal config resolves to the study defaults") {
  PipelineConfig config = study_config();
  CHECK(config.treated_id == "11111");
  CHECK(config.donor_ids.size() == 25);
  CHECK(config.design == default_design());
  CHECK(config.tax_old == 0.07);
  CHECK(config.tax_new == 0.19);
  CHECK(config.solver.kkt_tol == 1e-7);
  CHECK(config.solver.max_iters == 100000);
  CHECK(config.enforcement() == MonthKey{2024, 1});
  CHECK_FALSE(config.rebase);
}

TEST_CASE("config semantic errors") {
  SUBCASE("degenerate tax change") {
    std::stringstream cfg("treated_id = t\ndonor_ids = a, b\ntax_new = 0.07\n");
    CHECK_THROWS_WITH_AS(parse_config(cfg, "test"),
                         doctest::Contains("degenerate tax change"), ConfigError);
  }
  SUBCASE("treated inside the donor pool") {
    std::stringstream cfg("treated_id = a\ndonor_ids = a, b\n");
    CHECK_THROWS_WITH_AS(parse_config(cfg, "test"),
                         doctest::Contains("donor"), ConfigError);
  }
  SUBCASE("duplicate donors") {
    std::stringstream cfg("treated_id = t\ndonor_ids = a, b, a\n");
    CHECK_THROWS_AS(parse_config(cfg, "test"), ConfigError);
  }
  SUBCASE("unknown key names the line") {
    std::stringstream cfg("treated_id = t\ndonor_ids = a, b\nbogus_key = 1\n");
    CHECK_THROWS_WITH_AS(parse_config(cfg, "test"),
                         doctest::Contains("bogus_key"), ConfigError);
  }
  SUBCASE("partial design") {
    std::stringstream cfg("treated_id = t\ndonor_ids = a, b\npre_start = 2022-11\n");
    CHECK_THROWS_AS(parse_config(cfg, "test"), ConfigError);
  }
  SUBCASE("missing required keys") {
    std::stringstream cfg("donor_ids = a, b\n");
    CHECK_THROWS_WITH_AS(parse_config(cfg, "test"),
                         doctest::Contains("treated_id"), ConfigError);
  }
}

TEST_CASE("config accepts comments, custom design and solver overrides") {
  std::stringstream cfg(
      "# a comment\n"
      "treated_id = t\n"
      "donor_ids = a, b, c\n"
      "pre_start = 2020-01\n"
      "pre_end = 2020-06  # inline comment\n"
      "treatment_start = 2020-07\n"
      "eval_end = 2021-03\n"
      "tax_old = 0.19\n"
      "tax_new = 0.07\n"
      "kkt_tol = 1e-6\n"
      "max_iters = 5000\n"
      "rebase = true\n");
  PipelineConfig config = parse_config(cfg, "test");
  CHECK(config.design.pre_months() == 6);
  CHECK(config.design.eval_end == MonthKey{2021, 3});
  CHECK(config.tax_old == 0.19);
  CHECK(config.solver.kkt_tol == 1e-6);
  CHECK(config.solver.max_iters == 5000);
  CHECK(config.rebase);
  // Custom design without enforcement_start: no anticipation window.
  CHECK(config.enforcement() == config.design.treatment_start);
}

TEST_CASE("config hash is stable and sensitive") {
  PipelineConfig a = study_config();
  PipelineConfig b = study_config();
  CHECK(config_hash(a) == config_hash(b));
  b.tax_new = 0.2;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("well-formed file loads into a study-sized panel") {
  std::stringstream data(study_sized_csv());
  const auto raw = read_price_csv(data, "test.csv");
  CHECK(raw.size() == 26);

  PipelineConfig config = study_config();
  Panel panel = assemble_panel(raw, config.treated_id, config.donor_ids,
                               config.design);
  CHECK(panel.donors.size() == 25);
  CHECK(panel.treated.start() == MonthKey{2022, 11});
  CHECK(panel.treated.end() == MonthKey{2024, 7});
  CHECK(validate_panel(panel).ok());
}

TEST_CASE("extra series are ignored; requested ones must exist") {
  std::string csv = study_sized_csv();
  {
    MonthKey m{2022, 11};
    std::ostringstream extra;
    for (int i = 0; i < 21; ++i, m = successor(m))
      extra << "ZZ,unrelated," << m.str() << ",50\n";
    csv += extra.str();
  }
  std::stringstream data(csv);
  const auto raw = read_price_csv(data, "test.csv");
  PipelineConfig config = study_config();
  Panel with_extra = assemble_panel(raw, config.treated_id, config.donor_ids,
                                    config.design);

  std::stringstream plain(study_sized_csv());
  Panel without = assemble_panel(read_price_csv(plain, "test.csv"),
                                 config.treated_id, config.donor_ids,
                                 config.design);
  CHECK(with_extra == without);

  CHECK_THROWS_WITH_AS(
      assemble_panel(raw, "nope", config.donor_ids, config.design),
      doctest::Contains("nope"), DataError);
}

TEST_CASE("malformed rows are rejected with line context") {
  SUBCASE("zero value") {
    std::stringstream data(
        "series_id,label,month,value\n"
        "a,lbl,2022-11,0\n");
    CHECK_THROWS_WITH_AS(read_price_csv(data, "f.csv"), doctest::Contains("f.csv:2"),
                         DataError);
  }
  SUBCASE("negative value") {
    std::stringstream data(
        "series_id,label,month,value\n"
        "a,lbl,2022-11,-4\n");
    CHECK_THROWS_AS(read_price_csv(data, "f.csv"), DataError);
  }
  SUBCASE("duplicate id-month row") {
    std::stringstream data(
        "series_id,label,month,value\n"
        "a,lbl,2022-11,100\n"
        "a,lbl,2022-11,101\n");
    CHECK_THROWS_WITH_AS(read_price_csv(data, "f.csv"), doctest::Contains("duplicate"),
                         DataError);
  }
  SUBCASE("bad month format") {
    std::stringstream data(
        "series_id,label,month,value\n"
        "a,lbl,11/2022,100\n");
    CHECK_THROWS_AS(read_price_csv(data, "f.csv"), DataError);
  }
  SUBCASE("wrong header") {
    std::stringstream data("id,month,value\n");
    CHECK_THROWS_WITH_AS(read_price_csv(data, "f.csv"), doctest::Contains("header"),
                         DataError);
  }
  SUBCASE("wrong field count") {
    std::stringstream data(
        "series_id,label,month,value\n"
        "a,lbl,2022-11\n");
    CHECK_THROWS_AS(read_price_csv(data, "f.csv"), DataError);
  }
}

TEST_CASE("coverage gaps inside the window are fatal and name the months") {
  std::string csv = "series_id,label,month,value\n";
  MonthKey m{2022, 11};
  for (int i = 0; i < 21; ++i, m = successor(m)) {
    if (m == MonthKey{2024, 3}) continue;  // hole
    csv += "a,lbl," + m.str() + ",100\n";
    csv += "b,lbl," + m.str() + ",101\n";
    csv += "t,lbl," + m.str() + ",102\n";
  }
  csv += "b,lbl,2024-03,101\nt,lbl,2024-03,102\n";
  std::stringstream data(csv);
  const auto raw = read_price_csv(data, "f.csv");
  CHECK_THROWS_WITH_AS(assemble_panel(raw, "t", {"a", "b"}, default_design()),
                       doctest::Contains("2024-03"), DataError);
}

TEST_CASE("quoted labels with commas survive the round trip") {
  std::stringstream data(
      "series_id,label,month,value\n"
      "a,\"food, drinks and catering\",2023-01,100\n"
      "a,\"food, drinks and catering\",2023-02,101.5\n");
  const auto raw = read_price_csv(data, "f.csv");
  CHECK(raw.at("a").label == "food, drinks and catering");

  PriceSeries s = PriceSeries::from_map("a", raw.at("a").label, raw.at("a").obs);
  std::ostringstream out;
  write_price_csv(out, {&s});
  std::stringstream back(out.str());
  const auto again = read_price_csv(back, "round");
  CHECK(again.at("a").label == raw.at("a").label);
  CHECK(again.at("a").obs == raw.at("a").obs);
}

TEST_CASE("row order never matters") {
  std::string csv = study_sized_csv();
  // Reverse the data rows.
  std::vector<std::string> lines;
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  const std::string header = line;
  while (std::getline(ss, line))
    if (!line.empty()) lines.push_back(line);
  std::string reversed = header + "\n";
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) reversed += *it + "\n";

  std::stringstream a(csv), b(reversed);
  const auto raw_a = read_price_csv(a, "a.csv");
  const auto raw_b = read_price_csv(b, "b.csv");
  PipelineConfig config = study_config();
  CHECK(assemble_panel(raw_a, config.treated_id, config.donor_ids, config.design) ==
        assemble_panel(raw_b, config.treated_id, config.donor_ids, config.design));
}

TEST_CASE("generated panels round-trip through the wire format") {
  for (std::uint64_t seed : {4ULL, 9ULL, 44ULL}) {
    GenSpec spec;
    spec.donor_count = 4 + static_cast<int>(seed % 5);
    spec.noise_sd = 0.3;
    spec.seed = seed;
    auto [panel, truth] = generate(spec);

    std::ostringstream out;
    write_panel_csv(out, panel);
    std::stringstream in(out.str());
    const auto raw = read_price_csv(in, "roundtrip");
    Panel loaded = assemble_panel(raw, panel.treated.id(), panel.donor_ids(),
                                  panel.design);
    CAPTURE(seed);
    CHECK(loaded == panel);
  }
}

TEST_CASE("load_panel merges files and respects the window") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "scm_ingest_test";
  fs::create_directories(dir);

  // Split the study file in two halves by series.
  const std::string csv = study_sized_csv();
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  std::ofstream f1(dir / "part1.csv"), f2(dir / "part2.csv");
  f1 << line << "\n";
  f2 << line << "\n";
  int i = 0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    (i++ % 2 == 0 ? f1 : f2) << line << "\n";
  }
  f1.close();
  f2.close();

  PipelineConfig config = study_config();
  Panel panel = load_panel({(dir / "part1.csv").string(),
                            (dir / "part2.csv").string()},
                           config);
  CHECK(panel.donors.size() == 25);
  CHECK(validate_panel(panel).ok());

  CHECK_THROWS_AS(load_panel({(dir / "missing.csv").string()}, config), IoError);
  fs::remove_all(dir);
}
