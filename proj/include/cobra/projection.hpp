#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "cobra/dataset.hpp"

namespace cobra {

/// Coordinates on the top two principal components. Each component's sign
/// is fixed so that its largest-magnitude loading is positive; with a single
/// feature the second coordinate is 0.
inline std::vector<std::array<double, 2>> project_2d(const Dataset& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  const auto m = static_cast<Eigen::Index>(d.dim());
  std::vector<std::array<double, 2>> out(d.size(), {0.0, 0.0});
  if (n == 0) return out;

  Eigen::MatrixXd x(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      x(i, j) = d.row(static_cast<InstanceId>(i))[static_cast<std::size_t>(j)];
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);

  // Eigenvalues come back in ascending order.
  const Eigen::Index comps = std::min<Eigen::Index>(2, m);
  for (Eigen::Index c = 0; c < comps; ++c) {
    Eigen::VectorXd v = eig.eigenvectors().col(m - 1 - c);
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < m; ++j)
      if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
    if (v(arg) < 0) v = -v;
    const Eigen::VectorXd proj = x * v;
    for (Eigen::Index i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = proj(i);
  }
  return out;
}

}  // namespace cobra
