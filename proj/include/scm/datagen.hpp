#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "scm/fit.hpp"
#include "scm/panel.hpp"

namespace scm {

// Deterministic pseudo-random stream (SplitMix64). The contract is part of
// the fixture format: state advances by the golden-gamma increment, and
// doubles are built from the top 53 bits, so a seed fully determines every
// generated panel on a given platform. Cross-language fixtures should be
// exchanged as serialized panels, not by reimplementing the stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double gaussian();

 private:
  std::uint64_t state_;
};

// Recipe for a synthetic panel with known ground truth. Donor j follows
//   base_j + drift * mult_j * m + amp_j * sin(2*pi*(m + phase_j)/12) + ar_noise,
// and the treated unit is the true-weight combination plus the injected
// effect plus its own noise.
struct GenSpec {
  int donor_count = 5;
  MonthKey start{2022, 11};
  int pre_months = 12;
  int post_months = 9;

  // Ids are "D01", "D02", ...; empty means 0.5/0.3/0.2 on the first three.
  std::map<std::string, double> true_weights;

  double base_level = 112.0;
  double base_spread = 10.0;      // donor bases drawn from +-spread around base_level
  double drift = 0.35;            // index points per month, shared trend
  double drift_spread = 0.5;      // donor multipliers drawn from 1 +- spread
  double seasonal_amplitude = 0.5;  // per-donor amplitude drawn from [0, this]
  double noise_sd = 0.0;          // index points
  double noise_ar = 0.5;          // AR(1) coefficient of the noise
  std::map<MonthKey, double> effect;  // index points added to treated
  std::uint64_t seed = 42;

  StudyDesign design() const;
};

struct GenTruth {
  WeightVector weights;
  std::map<MonthKey, double> effect;  // zero-filled over the post window
};

// Deterministic in spec.seed. The generated panel always passes
// validate_panel. Throws ArgumentError on degenerate specs.
std::pair<Panel, GenTruth> generate(const GenSpec& spec);

}  // namespace scm
