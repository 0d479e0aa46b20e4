// Regenerates data/prices.csv, the bundled monthly price-index snapshot.
//
// The snapshot is a documented reconstruction, not an official export: 25
// donor divisions follow a shared disinflation path (strong monthly price
// growth in late 2022 fading through 2024) with division-specific levels,
// trend multipliers, seasonality, and AR(1) noise. The treated restaurant
// series equals a fixed convex combination of five service-heavy divisions
// plus a calibrated post-announcement response expressed as target
// pass-through rates of the 7% -> 19% VAT step, and an all-items index is
// included for the descriptive figure. Values are rounded to one decimal
// like published index tables. See data/README.md for provenance and for
// how to swap in a fresh official export.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "scm/csv.hpp"
#include "scm/datagen.hpp"
#include "scm/panel.hpp"

namespace {

struct Division {
  const char* id;
  const char* label;
  double base;    // index level at 2022-11
  double mult;    // share of the common monthly growth
  double amp;     // seasonal amplitude, index points
  double phase;   // seasonal phase, months
  double sd;      // AR(1) noise standard deviation, index points
};

// Donor pool reconstruction: 3-digit divisions that plausibly survive the
// published exclusion rules (no hospitality, no retail food and beverages,
// no predominantly public or administered prices, no annual price setters).
constexpr Division kDivisions[] = {
    {"02.2", "Tobacco", 118.5, 0.85, 0.00, 0.0, 0.10},
    {"03.1", "Clothing", 106.3, 1.05, 1.50, 6.5, 0.28},
    {"03.2", "Footwear", 105.1, 0.90, 1.20, 6.8, 0.24},
    {"04.3", "Maintenance and repair of the dwelling", 126.0, 1.30, 0.20, 3.0, 0.14},
    {"05.1", "Furniture and furnishings", 117.2, 0.80, 0.50, 10.0, 0.22},
    {"05.2", "Household textiles", 113.4, 0.90, 0.60, 7.5, 0.22},
    {"05.3", "Household appliances", 111.0, 0.50, 0.30, 2.0, 0.18},
    {"05.4", "Glassware tableware and household utensils", 114.3, 0.80, 0.40, 9.0, 0.18},
    {"05.5", "Tools and equipment for house and garden", 115.8, 0.90, 0.30, 5.0, 0.16},
    {"05.6", "Goods and services for routine household maintenance", 120.4, 1.20, 0.20, 1.0, 0.12},
    {"06.1", "Medical products appliances and equipment", 106.2, 0.70, 0.10, 4.0, 0.12},
    {"06.2", "Out-patient services", 108.0, 1.10, 0.10, 6.0, 0.10},
    {"07.1", "Purchase of vehicles", 112.9, 0.70, 0.20, 8.0, 0.14},
    {"07.2", "Operation of personal transport equipment", 123.5, 0.80, 0.60, 6.0, 0.32},
    {"08.2", "Telephone and telefax equipment", 96.5, -0.30, 0.10, 0.0, 0.14},
    {"08.3", "Telephone and telefax services", 100.6, 0.10, 0.00, 0.0, 0.08},
    {"09.1", "Audio-visual photographic and information processing equipment", 95.8, -0.40, 0.30, 11.0, 0.22},
    {"09.2", "Other major durables for recreation and culture", 108.8, 0.60, 0.40, 5.0, 0.18},
    {"09.3", "Other recreational items and equipment gardens and pets", 110.2, 0.80, 0.50, 4.0, 0.18},
    {"09.4", "Recreational and cultural services", 117.9, 1.30, 0.70, 6.0, 0.14},
    {"09.5", "Newspapers books and stationery", 116.1, 1.00, 0.20, 9.0, 0.14},
    {"09.6", "Package holidays", 124.6, 1.20, 1.80, 6.5, 0.38},
    {"12.1", "Personal care", 117.3, 1.20, 0.20, 0.0, 0.12},
    {"12.3", "Personal effects nec", 111.4, 0.80, 0.30, 3.0, 0.16},
    {"12.7", "Other services nec", 113.8, 1.10, 0.10, 2.0, 0.10},
};

// Common monthly growth, percent, 2022-12 .. 2024-07: the 2022/23 hike
// fading into 2024.
constexpr double kCommonGrowth[20] = {
    0.60, 0.70, 0.65, 0.55, 0.45, 0.35, 0.30, 0.28, 0.25, 0.25,  // ..2023-09
    0.22, 0.20, 0.18,                                            // ..2023-12
    0.28, 0.25, 0.22, 0.18, 0.15, 0.14, 0.13};                   // ..2024-07

// Combination that defines the treated unit's no-treatment path.
const std::map<std::string, double> kTrueWeights = {
    {"09.4", 0.34}, {"12.1", 0.22}, {"12.7", 0.16}, {"05.6", 0.14}, {"06.2", 0.14}};

// Target pass-through of the full VAT-induced increase, 2023-11 .. 2024-07.
// The first two months are announcement-window anticipation.
constexpr double kTargetPassThrough[9] = {0.037, 0.075, 0.311, 0.385, 0.437,
                                          0.478, 0.516, 0.550, 0.582};

constexpr int kMonths = 21;  // 2022-11 .. 2024-07
constexpr int kTreatmentIndex = 12;
constexpr double kFullFactor = 1.19 / 1.07;

double round1(double v) { return std::round(v * 10.0) / 10.0; }

std::vector<double> division_path(const Division& d, scm::SplitMix64& rng) {
  std::vector<double> level(kMonths);
  double trend = d.base;
  double noise = 0.0;
  for (int m = 0; m < kMonths; ++m) {
    if (m > 0) trend *= 1.0 + d.mult * kCommonGrowth[m - 1] / 100.0;
    const double shock = d.sd * rng.gaussian();
    noise = (m == 0) ? shock : 0.55 * noise + shock;
    level[static_cast<std::size_t>(m)] =
        trend +
        d.amp * std::sin(2.0 * std::numbers::pi * (m + d.phase) / 12.0) + noise;
  }
  return level;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regenerate the bundled price-index snapshot"};
  std::string out_path = "data/prices.csv";
  std::uint64_t seed = 20240901;
  app.add_option("--out", out_path, "output CSV path")->capture_default_str();
  app.add_option("--seed", seed, "RNG seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  scm::SplitMix64 rng(seed);
  const scm::MonthKey start{2022, 11};

  std::vector<scm::PriceSeries> donors;
  std::map<std::string, std::vector<double>> paths;
  for (const Division& d : kDivisions) {
    std::vector<double> level = division_path(d, rng);
    paths[d.id] = level;
    for (double& v : level) v = round1(v);
    donors.emplace_back(d.id, d.label, start, std::move(level));
  }

  // Treated unit: combination path plus the calibrated response.
  std::vector<double> treated(kMonths, 0.0);
  for (const auto& [id, w] : kTrueWeights) {
    const auto& path = paths.at(id);
    for (int m = 0; m < kMonths; ++m)
      treated[static_cast<std::size_t>(m)] += w * path[static_cast<std::size_t>(m)];
  }
  double noise = 0.0;
  for (int m = 0; m < kMonths; ++m) {
    const double sd = m < kTreatmentIndex ? 0.10 : 0.04;
    const double shock = sd * rng.gaussian();
    noise = (m == 0) ? shock : 0.35 * noise + shock;
    if (m >= kTreatmentIndex) {
      const double synthetic = treated[static_cast<std::size_t>(m)];
      treated[static_cast<std::size_t>(m)] +=
          kTargetPassThrough[m - kTreatmentIndex] * synthetic * (kFullFactor - 1.0);
    }
    treated[static_cast<std::size_t>(m)] += noise;
    treated[static_cast<std::size_t>(m)] = round1(treated[static_cast<std::size_t>(m)]);
  }
  scm::PriceSeries restaurant("11.11.1", "Restaurants cafes and the like", start,
                              treated);

  // All-items index for the descriptive figure.
  Division cpi_spec{"00", "All-items consumer price index", 114.0, 0.95, 0.25, 2.5, 0.10};
  std::vector<double> cpi_path = division_path(cpi_spec, rng);
  for (double& v : cpi_path) v = round1(v);
  scm::PriceSeries cpi(cpi_spec.id, cpi_spec.label, start, std::move(cpi_path));

  std::vector<const scm::PriceSeries*> series;
  series.push_back(&restaurant);
  for (const auto& d : donors) series.push_back(&d);
  series.push_back(&cpi);

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 3;
  }
  scm::write_price_csv(out, series);
  out.close();

  std::cout << "wrote " << out_path << ": " << series.size() << " series x "
            << kMonths << " months (seed " << seed << ")\n";
  std::printf("restaurant level %.1f -> %.1f; target pass-through 2024-01 %.1f%%,"
              " 2024-07 %.1f%%\n",
              treated.front(), treated.back(), kTargetPassThrough[2] * 100.0,
              kTargetPassThrough[8] * 100.0);
  return 0;
}
