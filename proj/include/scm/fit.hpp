#pragma once

#include <map>
#include <string>
#include <vector>

#include "scm/panel.hpp"

namespace scm {

// Donor weights on the unit simplex, keyed by donor id.
class WeightVector {
 public:
  WeightVector() = default;

  // Validates nonnegativity (>= -1e-12, then clamped to 0) and that the
  // weights sum to one within 1e-9.
  static WeightVector from_map(std::map<std::string, double> weights);
  static WeightVector from_values(const std::vector<std::string>& ids,
                                  const std::vector<double>& values);

  double at(const std::string& id) const;  // throws ArgumentError if absent
  bool contains(const std::string& id) const { return weights_.count(id) > 0; }
  std::size_t size() const { return weights_.size(); }
  const std::map<std::string, double>& map() const { return weights_; }

  // Ids with weight above the threshold, ascending by id.
  std::vector<std::string> support(double threshold = 1e-8) const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::map<std::string, double> weights_;
};

struct FitDiagnostics {
  int iterations = 0;
  int polish_steps = 0;
  double kkt_residual = 0.0;
  bool converged = false;
};

// Fitted synthetic control: weights, the implied synthetic series over the
// full study window, and the actual-minus-synthetic gap.
struct ScmFit {
  WeightVector weights;
  PriceSeries synthetic;  // id = treated id + "_synthetic"
  std::map<MonthKey, double> gap;
  double pre_rmspe = 0.0;
  double objective_value = 0.0;  // sum of squared pre-period residuals
  FitDiagnostics diagnostics;
};

struct FitOptions {
  double objective_tol = 1e-10;
  double kkt_tol = 1e-7;
  int max_iters = 100000;
  bool use_projection = true;
  bool polish = true;
  double weight_clamp = 1e-10;  // weights below this become exact zeros
};

// Solves min over simplex weights of the pre-period squared prediction
// error, all pre-treatment outcomes entering with uniform weight, and
// evaluates the synthetic series over the whole window. Requires a panel
// that passes validate_panel. Throws SolverError on non-convergence.
ScmFit fit_weights(const Panel& panel, const FitOptions& opts = {});

// sum_j w_j * donor_j(t); weights must be keyed exactly by the donor ids.
double synthetic_value(const Panel& panel, const WeightVector& weights, MonthKey t);

// sqrt(mean squared gap) over [from, to] inclusive.
double rmspe(const ScmFit& fit, MonthKey from, MonthKey to);

}  // namespace scm
