#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scm/error.hpp"
#include "scm/panel.hpp"

using namespace scm;

namespace {

PriceSeries make_series(const std::string& id, MonthKey start, int n,
                        double base = 100.0, double step = 0.5) {
  std::vector<double> values;
  for (int i = 0; i < n; ++i) values.push_back(base + step * i);
  return PriceSeries(id, "series " + id, start, std::move(values));
}

Panel make_panel() {
  StudyDesign design = default_design();
  Panel panel{make_series("T", design.pre_start, design.total_months(), 110.0),
              {make_series("A", design.pre_start, design.total_months(), 100.0),
               make_series("B", design.pre_start, design.total_months(), 120.0)},
              design};
  return panel;
}

}  // namespace

TEST_CASE("month ordering and arithmetic") {
  CHECK(MonthKey{2023, 1} < MonthKey{2023, 2});
  CHECK(MonthKey{2022, 12} < MonthKey{2023, 1});
  CHECK(successor(MonthKey{2022, 12}) == MonthKey{2023, 1});
  CHECK(successor(MonthKey{2023, 6}) == MonthKey{2023, 7});
  CHECK(advance(MonthKey{2022, 11}, 12) == MonthKey{2023, 11});
  CHECK(advance(MonthKey{2023, 3}, -5) == MonthKey{2022, 10});
  CHECK(month_diff(MonthKey{2022, 11}, MonthKey{2024, 7}) == 20);
  CHECK(month_diff(MonthKey{2024, 7}, MonthKey{2022, 11}) == -20);
}

TEST_CASE("month parse and format round-trip") {
  CHECK(MonthKey::parse("2023-07") == MonthKey{2023, 7});
  CHECK(MonthKey{2023, 7}.str() == "2023-07");
  CHECK_THROWS_AS(MonthKey::parse("2023-13"), DataError);
  CHECK_THROWS_AS(MonthKey::parse("2023-00"), DataError);
  CHECK_THROWS_AS(MonthKey::parse("2023/07"), DataError);
  CHECK_THROWS_AS(MonthKey::parse("Jul 2023"), DataError);
  CHECK_THROWS_AS(MonthKey::parse("23-07"), DataError);
}

TEST_CASE("series rejects gaps, empties and non-positive values") {
  CHECK_THROWS_AS(PriceSeries("x", "", {2023, 1}, {}), DataError);
  CHECK_THROWS_AS(PriceSeries("x", "", {2023, 1}, {100.0, 0.0}), DataError);
  CHECK_THROWS_AS(PriceSeries("x", "", {2023, 1}, {100.0, -3.0}), DataError);

  std::map<MonthKey, double> gapped{{{2023, 1}, 100.0}, {{2023, 3}, 101.0}};
  CHECK_THROWS_WITH_AS(PriceSeries::from_map("x", "", gapped),
                       doctest::Contains("2023-02"), DataError);

  std::map<MonthKey, double> ok{{{2023, 1}, 100.0}, {{2023, 2}, 101.0}};
  PriceSeries s = PriceSeries::from_map("x", "lbl", ok);
  CHECK(s.start() == MonthKey{2023, 1});
  CHECK(s.end() == MonthKey{2023, 2});
  CHECK(s.at({2023, 2}) == 101.0);
  CHECK(s.to_map() == ok);
}

TEST_CASE("slice covers the documented cases") {
  // 21 months starting 2022-11 covers the whole study window.
  PriceSeries s = make_series("11111", {2022, 11}, 21);

  Eigen::VectorXd pre = slice(s, {2022, 11}, {2023, 10});
  CHECK(pre.size() == 12);

  Eigen::VectorXd single = slice(s, {2023, 1}, {2023, 1});
  CHECK(single.size() == 1);
  CHECK(single[0] == s.at({2023, 1}));

  CHECK_THROWS_WITH_AS(slice(s, {2024, 8}, {2024, 9}),
                       doctest::Contains("11111"), DataError);
  CHECK_THROWS_WITH_AS(slice(s, {2024, 8}, {2024, 9}),
                       doctest::Contains("2024-08"), DataError);
}

TEST_CASE("study design invariants") {
  CHECK_NOTHROW(default_design());
  CHECK(default_design().pre_months() == 12);
  CHECK(default_design().post_months() == 9);
  CHECK(default_design().total_months() == 21);

  // Gap between pre-period and treatment start.
  CHECK_THROWS_AS(
      StudyDesign::make({2022, 11}, {2023, 10}, {2023, 12}, {2024, 7}),
      ConfigError);
  // One-month pre-period.
  CHECK_THROWS_AS(StudyDesign::make({2023, 10}, {2023, 10}, {2023, 11}, {2024, 7}),
                  ConfigError);
  // Reversed windows.
  CHECK_THROWS_AS(StudyDesign::make({2023, 10}, {2022, 11}, {2023, 11}, {2024, 7}),
                  ConfigError);
}

TEST_CASE("validate_panel reports violations as data") {
  Panel panel = make_panel();
  CHECK(validate_panel(panel).ok());

  SUBCASE("treated id duplicated in donors") {
    panel.donors.push_back(make_series("T", panel.design.pre_start,
                                       panel.design.total_months()));
    ValidationReport report = validate_panel(panel);
    REQUIRE_FALSE(report.ok());
    CHECK(report.str().find("treated unit present in donor pool") !=
          std::string::npos);
  }

  SUBCASE("donor with missing month is named") {
    // Donor covering all but 2024-03..2024-07.
    panel.donors[1] = make_series("B", panel.design.pre_start, 16, 120.0);
    ValidationReport report = validate_panel(panel);
    REQUIRE_FALSE(report.ok());
    CHECK(report.str().find("B") != std::string::npos);
    CHECK(report.str().find("2024-03") != std::string::npos);
  }

  SUBCASE("fewer than two donors") {
    panel.donors.pop_back();
    CHECK_FALSE(validate_panel(panel).ok());
  }

  SUBCASE("validation is idempotent and side-effect free") {
    const Panel copy = panel;
    ValidationReport first = validate_panel(panel);
    ValidationReport second = validate_panel(panel);
    CHECK(first.str() == second.str());
    CHECK(panel == copy);
  }
}

TEST_CASE("pre-period slices align across a valid panel") {
  Panel panel = make_panel();
  const Eigen::VectorXd treated =
      slice(panel.treated, panel.design.pre_start, panel.design.pre_end);
  for (const auto& donor : panel.donors) {
    CHECK(slice(donor, panel.design.pre_start, panel.design.pre_end).size() ==
          treated.size());
  }
}

TEST_CASE("rebase scales every series to 100 at pre_start") {
  Panel panel = make_panel();
  Panel rebased = rebase_panel(panel);
  CHECK(rebased.treated.at(panel.design.pre_start) == doctest::Approx(100.0));
  for (const auto& donor : rebased.donors)
    CHECK(donor.at(panel.design.pre_start) == doctest::Approx(100.0));
  // Relative dynamics preserved.
  const MonthKey last = panel.design.eval_end;
  CHECK(rebased.treated.at(last) / 100.0 ==
        doctest::Approx(panel.treated.at(last) /
                        panel.treated.at(panel.design.pre_start)));
}
