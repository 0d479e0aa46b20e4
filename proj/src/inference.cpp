#include "scm/inference.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "scm/error.hpp"

namespace scm {

namespace {

Panel panel_without_donor(const Panel& panel, const std::string& excluded) {
  Panel out{panel.treated, {}, panel.design};
  out.donors.reserve(panel.donors.size() - 1);
  for (const auto& d : panel.donors)
    if (d.id() != excluded) out.donors.push_back(d);
  return out;
}

Panel placebo_panel(const Panel& panel, const std::string& fake_treated) {
  Panel out{*panel.find_donor(fake_treated), {}, panel.design};
  out.donors.reserve(panel.donors.size() - 1);
  for (const auto& d : panel.donors)
    if (d.id() != fake_treated) out.donors.push_back(d);
  return out;
}

// Runs one fit per key, optionally across threads. Results are keyed by
// unit id, so assembly order never depends on completion order.
std::map<std::string, ScmFit> run_fits(
    const std::vector<std::pair<std::string, Panel>>& jobs,
    const FitOptions& opts, bool parallel,
    std::map<std::string, std::string>* failures) {
  std::map<std::string, ScmFit> results;
  if (parallel) {
    std::vector<std::future<ScmFit>> futures;
    futures.reserve(jobs.size());
    for (const auto& [id, panel] : jobs) {
      (void)id;
      futures.push_back(std::async(std::launch::async,
                                   [&panel, &opts] { return fit_weights(panel, opts); }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      try {
        results.emplace(jobs[i].first, futures[i].get());
      } catch (const Error& e) {
        if (!failures) throw;
        failures->emplace(jobs[i].first, e.what());
      }
    }
  } else {
    for (const auto& [id, panel] : jobs) {
      try {
        results.emplace(id, fit_weights(panel, opts));
      } catch (const Error& e) {
        if (!failures) throw;
        failures->emplace(id, e.what());
      }
    }
  }
  return results;
}

}  // namespace

LooResult leave_one_out(const Panel& panel, const InferenceOptions& opts) {
  if (panel.donors.size() < 3)
    throw DataError("leave_one_out: needs at least 3 donors so every variant "
                    "keeps a pool of 2");

  LooResult out;
  out.baseline = fit_weights(panel, opts.fit);
  const std::vector<std::string> positive =
      out.baseline.weights.support(opts.positive_weight_threshold);
  if (positive.empty())
    throw DataError("leave_one_out: baseline fit has no positive-weight donor");

  std::vector<std::pair<std::string, Panel>> jobs;
  jobs.reserve(positive.size());
  for (const auto& id : positive)
    jobs.emplace_back(id, panel_without_donor(panel, id));
  out.variants = run_fits(jobs, opts.fit, opts.parallel, nullptr);

  for (MonthKey m = panel.design.pre_start; m <= panel.design.eval_end;
       m = successor(m)) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [id, variant] : out.variants) {
      const double g = variant.gap.at(m);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    out.band[m] = {lo, hi};
  }
  return out;
}

double rmspe_ratio(const ScmFit& fit, const StudyDesign& design) {
  const double pre = rmspe(fit, design.pre_start, design.pre_end);
  const double post = rmspe(fit, design.treatment_start, design.eval_end);
  if (pre == 0.0 && post == 0.0) return 0.0;
  if (pre == 0.0) return std::numeric_limits<double>::infinity();
  return post / pre;
}

PlaceboResult placebo_test(const Panel& panel, const InferenceOptions& opts) {
  if (panel.donors.size() < 3)
    throw DataError("placebo_test: needs at least 3 donors");

  PlaceboResult out;
  out.treated_fit = fit_weights(panel, opts.fit);

  std::vector<std::pair<std::string, Panel>> jobs;
  jobs.reserve(panel.donors.size());
  for (const auto& d : panel.donors)
    jobs.emplace_back(d.id(), placebo_panel(panel, d.id()));
  out.placebo_fits = run_fits(jobs, opts.fit, opts.parallel, &out.failures);

  const StudyDesign& design = panel.design;
  auto record = [&](const std::string& id, const ScmFit& fit) {
    out.pre_rmspe[id] = rmspe(fit, design.pre_start, design.pre_end);
    out.post_rmspe[id] = rmspe(fit, design.treatment_start, design.eval_end);
    out.ratios[id] = rmspe_ratio(fit, design);
  };
  record(panel.treated.id(), out.treated_fit);
  for (const auto& [id, fit] : out.placebo_fits) record(id, fit);

  const double treated_pre = out.pre_rmspe.at(panel.treated.id());
  for (const auto& [id, pre] : out.pre_rmspe) {
    if (id != panel.treated.id() && treated_pre > 0.0 &&
        pre > opts.poor_prefit_factor * treated_pre) {
      out.flagged.push_back(id);
    }
  }

  // Rank by ratio, largest first; among infinite ratios by post-RMSPE;
  // remaining ties break on unit id so the ordering is reproducible.
  std::vector<std::string> order;
  for (const auto& [id, ratio] : out.ratios) {
    (void)ratio;
    if (opts.trim_poor_prefit &&
        std::find(out.flagged.begin(), out.flagged.end(), id) != out.flagged.end())
      continue;
    order.push_back(id);
  }
  std::sort(order.begin(), order.end(),
            [&](const std::string& a, const std::string& b) {
              const double ra = out.ratios.at(a);
              const double rb = out.ratios.at(b);
              const bool ia = std::isinf(ra);
              const bool ib = std::isinf(rb);
              if (ia != ib) return ia;
              if (ia && ib) {
                if (out.post_rmspe.at(a) != out.post_rmspe.at(b))
                  return out.post_rmspe.at(a) > out.post_rmspe.at(b);
                return a < b;
              }
              if (ra != rb) return ra > rb;
              return a < b;
            });
  out.ranking = order;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] == panel.treated.id()) out.treated_rank = static_cast<int>(i) + 1;
  return out;
}

}  // namespace scm
