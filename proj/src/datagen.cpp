#include "scm/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "scm/error.hpp"

namespace scm {

double SplitMix64::gaussian() {
  const double u1 = next_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

StudyDesign GenSpec::design() const {
  const MonthKey pre_end = advance(start, pre_months - 1);
  const MonthKey t0 = successor(pre_end);
  return StudyDesign::make(start, pre_end, t0, advance(t0, post_months - 1));
}

namespace {

std::string donor_id(int j) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "D%02d", j + 1);
  return buf;
}

}  // namespace

std::pair<Panel, GenTruth> generate(const GenSpec& spec) {
  if (spec.donor_count < 2)
    throw ArgumentError("generate: need at least 2 donors");
  if (spec.noise_sd < 0.0) throw ArgumentError("generate: negative noise sd");
  if (spec.pre_months < 2 || spec.post_months < 1)
    throw ArgumentError("generate: degenerate month range");

  const StudyDesign design = spec.design();
  const int months = design.total_months();
  SplitMix64 rng(spec.seed);

  // Resolve the true weights first so they are seed-independent.
  std::map<std::string, double> truth = spec.true_weights;
  if (truth.empty()) {
    truth[donor_id(0)] = 0.5;
    truth[donor_id(1)] = 0.3;
    truth[donor_id(2)] = spec.donor_count >= 3 ? 0.2 : 0.0;
    if (spec.donor_count < 3) {
      truth.erase(donor_id(2));
      truth[donor_id(0)] = 0.6;
      truth[donor_id(1)] = 0.4;
    }
  }
  for (const auto& [id, w] : truth) {
    bool known = false;
    for (int j = 0; j < spec.donor_count; ++j)
      if (id == donor_id(j)) known = true;
    if (!known)
      throw ArgumentError("generate: true weight names unknown donor '" + id + "'");
    (void)w;
  }
  const WeightVector w_true = WeightVector::from_map(truth);

  std::vector<PriceSeries> donors;
  donors.reserve(static_cast<std::size_t>(spec.donor_count));
  std::vector<std::vector<double>> paths;
  for (int j = 0; j < spec.donor_count; ++j) {
    const double base =
        spec.base_level + rng.uniform(-spec.base_spread, spec.base_spread);
    const double mult = 1.0 + rng.uniform(-spec.drift_spread, spec.drift_spread);
    const double amp = rng.uniform(0.0, spec.seasonal_amplitude);
    const double phase = rng.uniform(0.0, 12.0);
    std::vector<double> values(static_cast<std::size_t>(months));
    double noise = 0.0;
    for (int m = 0; m < months; ++m) {
      const double shock = spec.noise_sd > 0.0 ? spec.noise_sd * rng.gaussian() : 0.0;
      noise = (m == 0) ? shock : spec.noise_ar * noise + shock;
      values[static_cast<std::size_t>(m)] =
          base + spec.drift * mult * m +
          amp * std::sin(2.0 * std::numbers::pi * (m + phase) / 12.0) + noise;
    }
    paths.push_back(values);
    donors.emplace_back(donor_id(j), "generated donor " + donor_id(j),
                        design.pre_start, std::move(values));
  }

  GenTruth out_truth;
  out_truth.weights = w_true;
  for (MonthKey m = design.treatment_start; m <= design.eval_end; m = successor(m)) {
    auto it = spec.effect.find(m);
    out_truth.effect[m] = it == spec.effect.end() ? 0.0 : it->second;
  }

  std::vector<double> treated_values(static_cast<std::size_t>(months), 0.0);
  for (int j = 0; j < spec.donor_count; ++j) {
    const auto& w_map = w_true.map();
    auto it = w_map.find(donor_id(j));
    if (it == w_map.end()) continue;
    for (int m = 0; m < months; ++m)
      treated_values[static_cast<std::size_t>(m)] +=
          it->second * paths[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)];
  }
  double noise = 0.0;
  for (int m = 0; m < months; ++m) {
    const double shock = spec.noise_sd > 0.0 ? spec.noise_sd * rng.gaussian() : 0.0;
    noise = (m == 0) ? shock : spec.noise_ar * noise + shock;
    treated_values[static_cast<std::size_t>(m)] += noise;
    const MonthKey month = advance(design.pre_start, m);
    auto it = out_truth.effect.find(month);
    if (it != out_truth.effect.end())
      treated_values[static_cast<std::size_t>(m)] += it->second;
  }

  Panel panel{PriceSeries("TREATED", "generated treated unit", design.pre_start,
                          std::move(treated_values)),
              std::move(donors), design};
  return {std::move(panel), std::move(out_truth)};
}

}  // namespace scm
