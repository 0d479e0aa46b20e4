#include "scm/fit.hpp"

#include <cmath>

#include "scm/error.hpp"
#include "scm/qp.hpp"

namespace scm {

WeightVector WeightVector::from_map(std::map<std::string, double> weights) {
  if (weights.empty()) throw ArgumentError("weight vector: empty");
  double total = 0.0;
  for (auto& [id, w] : weights) {
    if (!std::isfinite(w) || w < -1e-12)
      throw ArgumentError("weight vector: negative weight for '" + id + "'");
    if (w < 0.0) w = 0.0;
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ArgumentError("weight vector: weights sum to " + std::to_string(total) +
                        ", expected 1");
  WeightVector out;
  out.weights_ = std::move(weights);
  return out;
}

WeightVector WeightVector::from_values(const std::vector<std::string>& ids,
                                       const std::vector<double>& values) {
  if (ids.size() != values.size())
    throw ArgumentError("weight vector: id/value length mismatch");
  std::map<std::string, double> m;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!m.emplace(ids[i], values[i]).second)
      throw ArgumentError("weight vector: duplicate id '" + ids[i] + "'");
  }
  return from_map(std::move(m));
}

double WeightVector::at(const std::string& id) const {
  auto it = weights_.find(id);
  if (it == weights_.end())
    throw ArgumentError("weight vector: no entry for '" + id + "'");
  return it->second;
}

std::vector<std::string> WeightVector::support(double threshold) const {
  std::vector<std::string> out;
  for (const auto& [id, w] : weights_)
    if (w > threshold) out.push_back(id);
  return out;
}

namespace {

Eigen::MatrixXd donor_matrix(const Panel& panel, MonthKey from, MonthKey to) {
  const int rows = month_diff(from, to) + 1;
  Eigen::MatrixXd x(rows, static_cast<Eigen::Index>(panel.donors.size()));
  for (std::size_t j = 0; j < panel.donors.size(); ++j)
    x.col(static_cast<Eigen::Index>(j)) = slice(panel.donors[j], from, to);
  return x;
}

}  // namespace

ScmFit fit_weights(const Panel& panel, const FitOptions& opts) {
  ValidationReport report = validate_panel(panel);
  if (!report.ok())
    throw DataError("fit_weights: invalid panel\n" + report.str());

  const StudyDesign& design = panel.design;
  const Eigen::MatrixXd x_pre =
      donor_matrix(panel, design.pre_start, design.pre_end);
  const Eigen::VectorXd y_pre =
      slice(panel.treated, design.pre_start, design.pre_end);

  SimplexLsqOptions<double> solver_opts;
  solver_opts.objective_tol = opts.objective_tol;
  solver_opts.kkt_tol = opts.kkt_tol;
  solver_opts.max_iters = opts.max_iters;
  solver_opts.use_projection = opts.use_projection;
  solver_opts.polish = opts.polish;
  SimplexLsqSolution<double> sol =
      solve_simplex_least_squares(x_pre, y_pre, solver_opts);

  if (!sol.converged) {
    throw SolverError(
        "fit_weights: no convergence within " + std::to_string(opts.max_iters) +
            " iterations (KKT residual " + std::to_string(sol.kkt_residual) + ")",
        std::vector<double>(sol.weights.data(),
                            sol.weights.data() + sol.weights.size()),
        sol.kkt_residual, sol.iterations);
  }

  // Clamp trace weights to exact zeros and renormalize, so the positive
  // support reported to the robustness checks is stable across runs.
  Eigen::VectorXd w = sol.weights;
  for (Eigen::Index j = 0; j < w.size(); ++j)
    if (w[j] < opts.weight_clamp) w[j] = 0.0;
  w /= w.sum();

  ScmFit fit;
  fit.weights = WeightVector::from_values(
      panel.donor_ids(), std::vector<double>(w.data(), w.data() + w.size()));

  const Eigen::MatrixXd x_all =
      donor_matrix(panel, design.pre_start, design.eval_end);
  const Eigen::VectorXd synth = x_all * w;
  fit.synthetic = PriceSeries(
      panel.treated.id() + "_synthetic", panel.treated.label() + " (synthetic)",
      design.pre_start, std::vector<double>(synth.data(), synth.data() + synth.size()));

  const Eigen::VectorXd actual =
      slice(panel.treated, design.pre_start, design.eval_end);
  const std::vector<MonthKey> months = design.months();
  for (std::size_t i = 0; i < months.size(); ++i)
    fit.gap[months[i]] = actual[static_cast<Eigen::Index>(i)] -
                         synth[static_cast<Eigen::Index>(i)];

  fit.objective_value = (x_pre * w - y_pre).squaredNorm();
  fit.pre_rmspe = std::sqrt(fit.objective_value / design.pre_months());
  fit.diagnostics.iterations = sol.iterations;
  fit.diagnostics.polish_steps = sol.polish_steps;
  fit.diagnostics.kkt_residual = simplex_kkt_residual<double>(x_pre, y_pre, w);
  fit.diagnostics.converged = sol.converged;
  return fit;
}

double synthetic_value(const Panel& panel, const WeightVector& weights, MonthKey t) {
  if (weights.size() != panel.donors.size())
    throw ArgumentError("synthetic_value: weights keyed by " +
                        std::to_string(weights.size()) + " ids, panel has " +
                        std::to_string(panel.donors.size()) + " donors");
  double value = 0.0;
  for (const auto& donor : panel.donors)
    value += weights.at(donor.id()) * donor.at(t);
  return value;
}

double rmspe(const ScmFit& fit, MonthKey from, MonthKey to) {
  if (!from.valid() || !to.valid() || from > to)
    throw ArgumentError("rmspe: invalid window " + from.str() + ".." + to.str());
  double total = 0.0;
  int count = 0;
  for (MonthKey m = from; m <= to; m = successor(m)) {
    auto it = fit.gap.find(m);
    if (it == fit.gap.end())
      throw ArgumentError("rmspe: gap not defined at " + m.str());
    total += it->second * it->second;
    ++count;
  }
  return std::sqrt(total / count);
}

}  // namespace scm
