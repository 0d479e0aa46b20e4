#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "scm/simplex.hpp"

namespace scm {

template <class Scalar>
struct SimplexLsqOptions {
  Scalar objective_tol = Scalar(1e-10);  // absolute, squared-residual scale
  Scalar kkt_tol = Scalar(1e-7);
  int max_iters = 100000;
  bool use_projection = true;  // false -> Frank-Wolfe iterations instead
  bool polish = true;          // active-set refinement of the support
};

template <class Scalar>
struct SimplexLsqSolution {
  Eigen::Vector<Scalar, Eigen::Dynamic> weights;
  Scalar objective = 0;
  Scalar kkt_residual = 0;
  int iterations = 0;    // first-order iterations taken
  int polish_steps = 0;  // equality-constrained subproblems solved
  bool converged = false;
};

// Stationarity measure for min ||Xw - y||^2 on the simplex, evaluated from
// the normal-equation form (G = X^T X, b = X^T y). At an optimum every
// supported coordinate's gradient equals the minimum gradient, so the
// residual is the largest excess over that minimum across the support.
template <class Scalar>
Scalar simplex_kkt_residual_gram(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& linear,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& w,
    Scalar support_threshold = Scalar(1e-10)) {
  const Eigen::Vector<Scalar, Eigen::Dynamic> g =
      Scalar(2) * (gram * w - linear);
  const Scalar mu = g.minCoeff();
  Scalar resid = 0;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (w[j] > support_threshold) resid = std::max(resid, g[j] - mu);
  }
  return resid;
}

template <class Scalar>
Scalar simplex_kkt_residual(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& predictors,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& target,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& w,
    Scalar support_threshold = Scalar(1e-10)) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram =
      predictors.transpose() * predictors;
  const Eigen::Vector<Scalar, Eigen::Dynamic> linear =
      predictors.transpose() * target;
  return simplex_kkt_residual_gram<Scalar>(gram, linear, w, support_threshold);
}

namespace detail {

// Largest eigenvalue of a symmetric PSD matrix by power iteration.
// Deterministic start; returns a slight overestimate for step-size safety.
template <class Scalar>
Scalar power_iteration_lmax(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  using Vector = Eigen::Vector<Scalar, Eigen::Dynamic>;
  const Eigen::Index n = m.rows();
  Vector v = Vector::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] += Scalar(i) * Scalar(1e-3);
  v.normalize();
  Scalar lambda = 0;
  for (int it = 0; it < 1000; ++it) {
    Vector mv = m * v;
    const Scalar norm = mv.norm();
    if (norm <= Scalar(0)) return Scalar(0);
    const Scalar next = v.dot(mv);
    v = mv / norm;
    if (it > 2 && std::abs(next - lambda) <= Scalar(1e-13) * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda * Scalar(1.01);
}

// Equality-constrained subproblem on a support set S:
//   minimize ||X w_S - y||^2  s.t.  sum(w_S) = 1
// via the bordered KKT system. Rank-deficient Gram blocks (collinear
// donors) get the minimum-norm solution.
template <class Scalar>
void solve_support_qp(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& linear,
    const std::vector<Eigen::Index>& support,
    Eigen::Vector<Scalar, Eigen::Dynamic>* w_support, Scalar* multiplier) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Vector<Scalar, Eigen::Dynamic>;
  const Eigen::Index k = static_cast<Eigen::Index>(support.size());
  Matrix kkt = Matrix::Zero(k + 1, k + 1);
  Vector rhs(k + 1);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index c = 0; c < k; ++c)
      kkt(a, c) = Scalar(2) * gram(support[a], support[c]);
    kkt(a, k) = Scalar(1);
    kkt(k, a) = Scalar(1);
    rhs[a] = Scalar(2) * linear[support[a]];
  }
  rhs[k] = Scalar(1);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
  Vector sol = cod.solve(rhs);
  *w_support = sol.head(k);
  *multiplier = sol[k];
}

// Primal active-set refinement from a feasible iterate. Returns true when
// the polished point is certified stationary to `tol`.
template <class Scalar>
bool active_set_polish(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& linear,
    Eigen::Vector<Scalar, Eigen::Dynamic>* w_in_out, Scalar tol,
    int* steps_taken) {
  using Vector = Eigen::Vector<Scalar, Eigen::Dynamic>;
  const Eigen::Index n = gram.rows();
  const Scalar support_eps = Scalar(1e-10);

  Vector w = *w_in_out;
  std::vector<char> in_support(static_cast<std::size_t>(n), 0);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (w[j] > support_eps) {
      in_support[static_cast<std::size_t>(j)] = 1;
    } else {
      w[j] = Scalar(0);
    }
  }
  const Scalar mass = w.sum();
  if (mass <= Scalar(0)) return false;
  w /= mass;

  const int max_steps = static_cast<int>(4 * n + 16);
  for (int step = 0; step < max_steps; ++step) {
    std::vector<Eigen::Index> support;
    for (Eigen::Index j = 0; j < n; ++j)
      if (in_support[static_cast<std::size_t>(j)]) support.push_back(j);
    if (support.empty()) return false;

    Vector w_sub;
    Scalar multiplier = 0;
    solve_support_qp<Scalar>(gram, linear, support, &w_sub, &multiplier);
    ++*steps_taken;

    const Scalar neg_tol = Scalar(1e-13);
    if (w_sub.minCoeff() >= -neg_tol) {
      Vector candidate = Vector::Zero(n);
      for (std::size_t a = 0; a < support.size(); ++a)
        candidate[support[a]] = std::max(w_sub[static_cast<Eigen::Index>(a)], Scalar(0));
      const Scalar total = candidate.sum();
      if (total <= Scalar(0)) return false;
      candidate /= total;

      const Vector g = Scalar(2) * (gram * candidate - linear);
      const Scalar mu = g.minCoeff();
      Scalar resid = 0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (candidate[j] > support_eps) resid = std::max(resid, g[j] - mu);

      if (resid <= tol) {
        *w_in_out = candidate;
        return true;
      }
      // Most violating coordinate enters the support.
      Eigen::Index entering = -1;
      g.minCoeff(&entering);
      if (in_support[static_cast<std::size_t>(entering)]) return false;
      in_support[static_cast<std::size_t>(entering)] = 1;
      w = candidate;
      continue;
    }

    // Blocked: step toward the subproblem solution until the first
    // coordinate hits zero, then drop it from the support.
    Vector target = Vector::Zero(n);
    for (std::size_t a = 0; a < support.size(); ++a)
      target[support[a]] = w_sub[static_cast<Eigen::Index>(a)];
    Scalar alpha = Scalar(1);
    for (Eigen::Index j : support) {
      if (target[j] < Scalar(0) && w[j] > target[j])
        alpha = std::min(alpha, w[j] / (w[j] - target[j]));
    }
    w += alpha * (target - w);
    for (Eigen::Index j : support) {
      if (w[j] <= Scalar(1e-14)) {
        w[j] = Scalar(0);
        in_support[static_cast<std::size_t>(j)] = 0;
      }
    }
    const Scalar total = w.sum();
    if (total <= Scalar(0)) return false;
    w /= total;
  }
  return false;
}

}  // namespace detail

// Minimizes ||X w - y||^2 over the probability simplex. Accelerated
// projected gradient with the exact Lipschitz step from the Gram matrix's
// largest eigenvalue; optional Frank-Wolfe fallback when projection is
// disabled; active-set polish certifies the KKT conditions.
template <class DerivedX, class DerivedY>
SimplexLsqSolution<typename DerivedX::Scalar> solve_simplex_least_squares(
    const Eigen::MatrixBase<DerivedX>& predictors,
    const Eigen::MatrixBase<DerivedY>& target,
    const SimplexLsqOptions<typename DerivedX::Scalar>& opts = {}) {
  using Scalar = typename DerivedX::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Vector<Scalar, Eigen::Dynamic>;

  const Matrix x = predictors;
  const Vector y = target;
  const Eigen::Index n = x.cols();
  if (n == 0) throw ArgumentError("solve_simplex_least_squares: no columns");
  if (x.rows() != y.size())
    throw ArgumentError("solve_simplex_least_squares: row mismatch");
  if (!x.allFinite() || !y.allFinite())
    throw ArgumentError("solve_simplex_least_squares: non-finite input");

  const Matrix gram = x.transpose() * x;
  const Vector linear = x.transpose() * y;
  const Scalar y_sq = y.squaredNorm();
  auto objective = [&](const Vector& w) {
    return std::max(Scalar(0), w.dot(gram * w) - Scalar(2) * linear.dot(w) + y_sq);
  };

  SimplexLsqSolution<Scalar> out;
  if (n == 1) {
    out.weights = Vector::Ones(1);
    out.objective = objective(out.weights);
    out.kkt_residual = Scalar(0);
    out.converged = true;
    return out;
  }

  const Scalar lipschitz = Scalar(2) * detail::power_iteration_lmax<Scalar>(gram);
  Vector w = Vector::Constant(n, Scalar(1) / Scalar(n));
  Vector best_w = w;
  Scalar best_f = objective(w);

  auto finalize = [&](Vector candidate, int iters, bool apg_certified) {
    if (opts.polish) {
      Vector polished = candidate;
      if (detail::active_set_polish<Scalar>(gram, linear, &polished,
                                            opts.kkt_tol, &out.polish_steps)) {
        const Scalar f_pol = objective(polished);
        const Scalar resid =
            simplex_kkt_residual_gram<Scalar>(gram, linear, polished);
        if (resid <= opts.kkt_tol &&
            f_pol <= objective(candidate) + opts.objective_tol) {
          out.weights = polished;
          out.objective = f_pol;
          out.kkt_residual = resid;
          out.iterations = iters;
          out.converged = true;
          return true;
        }
      }
    }
    if (apg_certified) {
      out.weights = candidate;
      out.objective = objective(candidate);
      out.kkt_residual = simplex_kkt_residual_gram<Scalar>(gram, linear, candidate);
      out.iterations = iters;
      out.converged = true;
      return true;
    }
    return false;
  };

  if (lipschitz <= Scalar(0)) {
    // Zero Gram matrix cannot occur with positive price data; any feasible
    // point is optimal for a constant objective.
    out.weights = w;
    out.objective = objective(w);
    out.kkt_residual = simplex_kkt_residual_gram<Scalar>(gram, linear, w);
    out.converged = true;
    return out;
  }

  if (opts.use_projection) {
    // FISTA with adaptive restart.
    Vector z = w;
    Scalar momentum = Scalar(1);
    Scalar f_prev = best_f;
    for (int iter = 1; iter <= opts.max_iters; ++iter) {
      const Vector grad_z = Scalar(2) * (gram * z - linear);
      Vector w_next = project_to_simplex(z - grad_z / lipschitz);
      Scalar f_next = objective(w_next);
      if (f_next > f_prev) {  // restart momentum on non-monotone step
        momentum = Scalar(1);
        z = w;
        const Vector grad_w = Scalar(2) * (gram * w - linear);
        w_next = project_to_simplex(z - grad_w / lipschitz);
        f_next = objective(w_next);
      }
      const Scalar momentum_next =
          (Scalar(1) + std::sqrt(Scalar(1) + Scalar(4) * momentum * momentum)) /
          Scalar(2);
      z = w_next + ((momentum - Scalar(1)) / momentum_next) * (w_next - w);
      momentum = momentum_next;
      w = w_next;
      f_prev = f_next;
      if (f_next < best_f) {
        best_f = f_next;
        best_w = w;
      }

      const Scalar resid = simplex_kkt_residual_gram<Scalar>(gram, linear, w);
      if (resid <= opts.kkt_tol) {
        if (finalize(w, iter, true)) return out;
      }
      if (opts.polish && (iter == 50 || iter % 200 == 0)) {
        if (finalize(best_w, iter, false)) return out;
      }
    }
  } else {
    // Frank-Wolfe with exact line search; sublinear on its own, so the
    // polish stage normally supplies the final accuracy.
    Scalar f_curr = best_f;
    for (int iter = 1; iter <= opts.max_iters; ++iter) {
      const Vector grad = Scalar(2) * (gram * w - linear);
      Eigen::Index vertex = 0;
      grad.minCoeff(&vertex);
      Vector direction = -w;
      direction[vertex] += Scalar(1);
      const Scalar gap = -grad.dot(direction);
      if (gap <= opts.objective_tol) {
        if (finalize(w, iter, true)) return out;
      }
      const Scalar curvature = direction.dot(gram * direction);
      Scalar step = Scalar(1);
      if (curvature > Scalar(0))
        step = std::min(Scalar(1), std::max(Scalar(0), gap / (Scalar(2) * curvature)));
      w += step * direction;
      f_curr = objective(w);
      if (f_curr < best_f) {
        best_f = f_curr;
        best_w = w;
      }
      const Scalar resid = simplex_kkt_residual_gram<Scalar>(gram, linear, w);
      if (resid <= opts.kkt_tol) {
        if (finalize(w, iter, true)) return out;
      }
      if (opts.polish && (iter == 50 || iter % 200 == 0)) {
        if (finalize(best_w, iter, false)) return out;
      }
    }
  }

  // Last polish attempt before reporting non-convergence.
  if (finalize(best_w, opts.max_iters, false)) return out;
  out.weights = best_w;
  out.objective = best_f;
  out.kkt_residual = simplex_kkt_residual_gram<Scalar>(gram, linear, best_w);
  out.iterations = opts.max_iters;
  out.converged = false;
  return out;
}

}  // namespace scm
