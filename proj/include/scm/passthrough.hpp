#pragma once

#include <map>

#include "scm/fit.hpp"

namespace scm {

// An ad-valorem tax change. full_factor() scales a net price from the old
// to the new gross level: (1 + tax_new) / (1 + tax_old).
class TaxChange {
 public:
  TaxChange(double tax_old, double tax_new);
  double tax_old() const { return old_; }
  double tax_new() const { return new_; }
  double full_factor() const { return (1.0 + new_) / (1.0 + old_); }

 private:
  double old_;
  double new_;
};

// Monthly pass-through rates; defined from treatment_start onward only.
// Rates are reported unclamped and may leave [0, 1].
struct PassThroughSeries {
  std::map<MonthKey, double> rates;
};

// Synthetic series scaled by the full factor over [treatment_start, eval_end]:
// the price path had the tax change been passed through completely.
PriceSeries full_passthrough_series(const ScmFit& fit, const TaxChange& tax,
                                    const StudyDesign& design);

// Share of the full tax-induced increase present in the actual price:
//   (actual - synthetic) / (synthetic * (full_factor - 1)).
// 0 at no response, 1 at full pass-through, linear in `actual`.
double passthrough_rate(double actual, double synthetic, const TaxChange& tax);

// passthrough_rate applied month by month from treatment_start.
PassThroughSeries passthrough_series(const ScmFit& fit, const TaxChange& tax,
                                     const StudyDesign& design);

struct TreatmentEffect {
  double points = 0.0;   // actual - synthetic, index points
  double percent = 0.0;  // actual / synthetic - 1
};

// Effect at a post-treatment month; throws ArgumentError before treatment.
TreatmentEffect treatment_effect(const ScmFit& fit, MonthKey t,
                                 const StudyDesign& design);

}  // namespace scm
