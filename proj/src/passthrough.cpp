#include "scm/passthrough.hpp"

#include <cmath>

#include "scm/error.hpp"

namespace scm {

TaxChange::TaxChange(double tax_old, double tax_new) : old_(tax_old), new_(tax_new) {
  if (!std::isfinite(tax_old) || tax_old < 0.0 || tax_old >= 1.0)
    throw ConfigError("tax change: tax_old must lie in [0, 1)");
  if (!std::isfinite(tax_new) || tax_new < 0.0 || tax_new >= 1.0)
    throw ConfigError("tax change: tax_new must lie in [0, 1)");
  if (tax_new == tax_old) throw ConfigError("tax change: degenerate tax change");
}

PriceSeries full_passthrough_series(const ScmFit& fit, const TaxChange& tax,
                                    const StudyDesign& design) {
  const Eigen::VectorXd synth =
      slice(fit.synthetic, design.treatment_start, design.eval_end);
  std::vector<double> values(static_cast<std::size_t>(synth.size()));
  for (Eigen::Index i = 0; i < synth.size(); ++i)
    values[static_cast<std::size_t>(i)] = synth[i] * tax.full_factor();
  return PriceSeries(fit.synthetic.id() + "_full_pass_through",
                     fit.synthetic.label() + " at full pass-through",
                     design.treatment_start, std::move(values));
}

double passthrough_rate(double actual, double synthetic, const TaxChange& tax) {
  if (!(synthetic > 0.0))
    throw ArgumentError("passthrough_rate: synthetic value must be positive");
  return (actual - synthetic) / (synthetic * (tax.full_factor() - 1.0));
}

PassThroughSeries passthrough_series(const ScmFit& fit, const TaxChange& tax,
                                     const StudyDesign& design) {
  PassThroughSeries out;
  for (MonthKey m = design.treatment_start; m <= design.eval_end; m = successor(m)) {
    const double synth = fit.synthetic.at(m);
    const double actual = synth + fit.gap.at(m);
    out.rates[m] = passthrough_rate(actual, synth, tax);
  }
  return out;
}

TreatmentEffect treatment_effect(const ScmFit& fit, MonthKey t,
                                 const StudyDesign& design) {
  if (t < design.treatment_start)
    throw ArgumentError("treatment_effect: " + t.str() + " precedes treatment start " +
                        design.treatment_start.str());
  auto it = fit.gap.find(t);
  if (it == fit.gap.end())
    throw ArgumentError("treatment_effect: gap not defined at " + t.str());
  TreatmentEffect effect;
  effect.points = it->second;
  const double synth = fit.synthetic.at(t);
  effect.percent = (synth + it->second) / synth - 1.0;
  return effect;
}

}  // namespace scm
