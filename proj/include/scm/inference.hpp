#pragma once

#include <map>
#include <string>
#include <vector>

#include "scm/fit.hpp"

namespace scm {

struct InferenceOptions {
  FitOptions fit;
  double positive_weight_threshold = 1e-8;  // matches the fit-side clamping
  bool parallel = false;                    // fan refits out across threads
  bool trim_poor_prefit = false;            // drop flagged units from ranking
  double poor_prefit_factor = 5.0;          // flagged when pre-RMSPE exceeds
                                            // this multiple of the treated's
};

// Refits with each positive-weight donor removed; band is the per-month
// min/max gap across the variants.
struct LooResult {
  ScmFit baseline;
  std::map<std::string, ScmFit> variants;  // keyed by the excluded donor
  std::map<MonthKey, std::pair<double, double>> band;
};

// In-space placebo study: every donor takes a turn as the treated unit with
// the remaining donors as its pool; the actually-treated unit never enters
// a placebo pool. Units are ranked by post/pre RMSPE ratio, largest first.
struct PlaceboResult {
  ScmFit treated_fit;
  std::map<std::string, ScmFit> placebo_fits;
  std::map<std::string, double> pre_rmspe;   // per unit, treated included
  std::map<std::string, double> post_rmspe;
  std::map<std::string, double> ratios;
  std::vector<std::string> ranking;          // unit ids, rank 1 first
  int treated_rank = 0;                      // 1 = largest ratio
  std::vector<std::string> flagged;          // poor pre-fit units
  std::map<std::string, std::string> failures;  // per-unit refit errors
};

LooResult leave_one_out(const Panel& panel, const InferenceOptions& opts = {});

PlaceboResult placebo_test(const Panel& panel, const InferenceOptions& opts = {});

// post-window RMSPE / pre-window RMSPE; +infinity when only the pre-window
// error is zero, 0 when both are.
double rmspe_ratio(const ScmFit& fit, const StudyDesign& design);

}  // namespace scm
