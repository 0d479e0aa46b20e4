#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scm/datagen.hpp"
#include "scm/error.hpp"
#include "scm/fit.hpp"

using namespace scm;

namespace {

// Three-donor panel around a treated series that equals donor A on the
// pre-period and drifts away afterwards.
Panel exact_match_panel() {
  StudyDesign design = default_design();
  const int n = design.total_months();
  std::vector<double> a, b, c, treated;
  for (int m = 0; m < n; ++m) {
    a.push_back(100.0 + 0.6 * m);
    b.push_back(90.0 + 1.5 * m);
    c.push_back(120.0 - 0.2 * m);
    treated.push_back(100.0 + 0.6 * m + (m >= design.pre_months() ? 4.0 : 0.0));
  }
  return Panel{PriceSeries("T", "", design.pre_start, treated),
               {PriceSeries("A", "", design.pre_start, a),
                PriceSeries("B", "", design.pre_start, b),
                PriceSeries("C", "", design.pre_start, c)},
               design};
}

}  // namespace

TEST_CASE("weight vector invariants") {
  CHECK_THROWS_AS(WeightVector::from_map({}), ArgumentError);
  CHECK_THROWS_AS(WeightVector::from_map({{"a", 0.6}, {"b", 0.6}}), ArgumentError);
  CHECK_THROWS_AS(WeightVector::from_map({{"a", 1.5}, {"b", -0.5}}), ArgumentError);

  // A -1e-13 weight is rounding debris, not a violation; it clamps to zero.
  WeightVector w = WeightVector::from_map({{"a", 1.0 + 1e-13}, {"b", -1e-13}});
  CHECK(w.at("b") == 0.0);
  CHECK(w.support() == std::vector<std::string>{"a"});
  CHECK_THROWS_AS(w.at("missing"), ArgumentError);
}

TEST_CASE("treated identical to one donor on the pre-period") {
  Panel panel = exact_match_panel();
  ScmFit fit = fit_weights(panel);
  CHECK(fit.weights.at("A") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.weights.at("B") == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.pre_rmspe <= 1e-9);
  CHECK(fit.diagnostics.kkt_residual <= 1e-7);

  // Post-period gap picks up the +4 drift.
  CHECK(fit.gap.at({2024, 7}) == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(fit.gap.at(panel.design.pre_end) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("symmetric midpoint panel") {
  StudyDesign design = StudyDesign::make({2023, 8}, {2023, 10}, {2023, 11}, {2023, 12});
  std::vector<double> a(5, 1.0), b(5, 3.0), t(5, 2.0);
  Panel panel{PriceSeries("T", "", design.pre_start, t),
              {PriceSeries("A", "", design.pre_start, a),
               PriceSeries("B", "", design.pre_start, b)},
              design};
  ScmFit fit = fit_weights(panel);
  CHECK(fit.weights.at("A") == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit.weights.at("B") == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit.objective_value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("synthetic series satisfies definition and hull bounds") {
  GenSpec spec;
  spec.donor_count = 6;
  spec.noise_sd = 0.4;
  spec.seed = 91;
  auto [panel, truth] = generate(spec);
  ScmFit fit = fit_weights(panel);

  for (MonthKey m : panel.design.months()) {
    double expected = 0.0;
    double lo = panel.donors.front().at(m), hi = lo;
    for (const auto& d : panel.donors) {
      expected += fit.weights.at(d.id()) * d.at(m);
      lo = std::min(lo, d.at(m));
      hi = std::max(hi, d.at(m));
    }
    CHECK(fit.synthetic.at(m) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(fit.synthetic.at(m) >= lo - 1e-9);
    CHECK(fit.synthetic.at(m) <= hi + 1e-9);
    CHECK(fit.gap.at(m) ==
          doctest::Approx(panel.treated.at(m) - fit.synthetic.at(m)).epsilon(1e-12));
  }
}

TEST_CASE("synthetic_value on vertex and uniform weights") {
  Panel panel = exact_match_panel();
  const MonthKey t{2023, 5};

  WeightVector vertex =
      WeightVector::from_map({{"A", 1.0}, {"B", 0.0}, {"C", 0.0}});
  CHECK(synthetic_value(panel, vertex, t) == panel.find_donor("A")->at(t));

  WeightVector uniform = WeightVector::from_map(
      {{"A", 1.0 / 3}, {"B", 1.0 / 3}, {"C", 1.0 / 3}});
  const double mean = (panel.find_donor("A")->at(t) + panel.find_donor("B")->at(t) +
                       panel.find_donor("C")->at(t)) /
                      3.0;
  CHECK(synthetic_value(panel, uniform, t) == doctest::Approx(mean).epsilon(1e-12));

  WeightVector mismatched = WeightVector::from_map({{"A", 0.5}, {"X", 0.5}});
  CHECK_THROWS_AS(synthetic_value(panel, mismatched, t), ArgumentError);
}

TEST_CASE("rmspe on hand-computed windows") {
  Panel panel = exact_match_panel();
  ScmFit fit = fit_weights(panel);

  SUBCASE("zero gap window") {
    CHECK(rmspe(fit, panel.design.pre_start, panel.design.pre_end) <= 1e-9);
  }

  SUBCASE("gap (3, 4) gives sqrt(12.5)") {
    fit.gap[{2023, 11}] = 3.0;
    fit.gap[{2023, 12}] = 4.0;
    CHECK(rmspe(fit, {2023, 11}, {2023, 12}) ==
          doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
  }

  SUBCASE("invalid window") {
    CHECK_THROWS_AS(rmspe(fit, {2024, 7}, {2023, 11}), ArgumentError);
    CHECK_THROWS_AS(rmspe(fit, {2020, 1}, {2020, 2}), ArgumentError);
  }
}

TEST_CASE("oracle recovery on noise-free generated panels") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    GenSpec spec;
    spec.donor_count = 5;
    spec.noise_sd = 0.0;
    spec.seasonal_amplitude = 1.0;
    spec.seed = seed;
    spec.true_weights = {{"D01", 0.45}, {"D03", 0.35}, {"D05", 0.2}};
    auto [panel, truth] = generate(spec);
    ScmFit fit = fit_weights(panel);
    CAPTURE(seed);
    for (const auto& [id, w_true] : truth.weights.map())
      CHECK(std::abs(fit.weights.at(id) - w_true) <= 1e-4);
    CHECK(fit.pre_rmspe <= 1e-8);
  }
}

TEST_CASE("scale equivariance at the panel level") {
  GenSpec spec;
  spec.donor_count = 5;
  spec.noise_sd = 0.3;
  spec.seed = 17;
  auto [panel, truth] = generate(spec);
  ScmFit base = fit_weights(panel);

  for (double c : {0.5, 2.0, 10.0}) {
    Panel scaled = panel;
    auto scale_series = [&](const PriceSeries& s) {
      std::vector<double> values = s.values();
      for (double& v : values) v *= c;
      return PriceSeries(s.id(), s.label(), s.start(), std::move(values));
    };
    scaled.treated = scale_series(panel.treated);
    for (std::size_t j = 0; j < panel.donors.size(); ++j)
      scaled.donors[j] = scale_series(panel.donors[j]);

    ScmFit fit = fit_weights(scaled);
    for (const auto& [id, w] : base.weights.map())
      CHECK(fit.weights.at(id) == doctest::Approx(w).epsilon(1e-6));
    for (MonthKey m : panel.design.post_window())
      CHECK(fit.gap.at(m) == doctest::Approx(base.gap.at(m) * c).epsilon(1e-7));
  }
}

TEST_CASE("minimal design: two pre months, one post month") {
  StudyDesign design = StudyDesign::make({2023, 9}, {2023, 10}, {2023, 11}, {2023, 11});
  std::vector<double> a{1.0, 2.0, 3.0}, b{3.0, 4.0, 5.0}, t{2.0, 3.0, 4.5};
  Panel panel{PriceSeries("T", "", design.pre_start, t),
              {PriceSeries("A", "", design.pre_start, a),
               PriceSeries("B", "", design.pre_start, b)},
              design};
  ScmFit fit = fit_weights(panel);
  CHECK(fit.weights.at("A") == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit.weights.at("B") == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit.gap.at({2023, 11}) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("invalid panel is rejected before solving") {
  Panel panel = exact_match_panel();
  panel.donors.push_back(panel.treated);  // treated id inside the pool
  CHECK_THROWS_AS(fit_weights(panel), DataError);
}

TEST_CASE("non-convergence carries diagnostics") {
  GenSpec spec;
  spec.donor_count = 6;
  spec.noise_sd = 1.0;
  spec.seed = 5;
  auto [panel, truth] = generate(spec);

  FitOptions opts;
  opts.polish = false;
  opts.max_iters = 3;
  opts.kkt_tol = 1e-15;  // below what floating point can certify
  try {
    fit_weights(panel, opts);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.best_weights.size() == 6);
    CHECK(e.kkt_residual > 0.0);
    double sum = 0.0;
    for (double w : e.best_weights) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}
