#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "scm/error.hpp"

namespace scm {

// Euclidean projection of v onto the probability simplex
// { w : w >= 0, sum(w) = 1 }, via the sorting scheme of Held et al.:
// w_i = max(v_i - theta, 0) with theta chosen so the result sums to one.
template <typename Derived>
Eigen::Vector<typename Derived::Scalar, Eigen::Dynamic> project_to_simplex(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Vector<Scalar, Eigen::Dynamic>;

  const Eigen::Index n = v.size();
  if (n == 0) throw ArgumentError("project_to_simplex: empty input");
  Vector x = v;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(static_cast<double>(x[i])))
      throw ArgumentError("project_to_simplex: non-finite input");
  }

  std::vector<Scalar> u(x.data(), x.data() + n);
  std::sort(u.begin(), u.end(), std::greater<Scalar>());

  Scalar cumulative = 0;
  Scalar theta = 0;
  Eigen::Index rho = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += u[static_cast<std::size_t>(i)];
    const Scalar candidate = (cumulative - Scalar(1)) / Scalar(i + 1);
    if (u[static_cast<std::size_t>(i)] - candidate > Scalar(0)) {
      rho = i + 1;
      theta = candidate;
    }
  }
  (void)rho;

  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i)
    w[i] = std::max(x[i] - theta, Scalar(0));
  return w;
}

}  // namespace scm
