#include "bip/bench1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bip {

double PiecewiseSolution1D::evaluate(double x) const {
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("evaluation point outside [0, 1]");
  const int n = static_cast<int>(theta.size());
  const int k = std::clamp(static_cast<int>(std::floor(x * n)), 0, n - 1);
  return -(x * x / 2.0 + c * x) / theta[k] + d[k];
}

PiecewiseSolution1D solve_1d(const Eigen::VectorXd& theta) {
  const int n = static_cast<int>(theta.size());
  if (n < 1) throw std::invalid_argument("theta must be non-empty");
  for (int k = 0; k < n; ++k)
    if (!(theta[k] > 0.0) || !std::isfinite(theta[k]))
      throw std::invalid_argument("theta must be positive and finite");

  PiecewiseSolution1D sol;
  sol.theta = theta;

  // Flux continuity fixes a single constant c; u(1) = 0 then follows from
  // the choice of c, and d_k telescopes from interface continuity at k/n.
  double weighted = 0.0, total = 0.0;
  for (int k = 0; k < n; ++k) {
    weighted += (2.0 * k + 1.0) / theta[k];
    total += 1.0 / theta[k];
  }
  sol.c = -weighted / (2.0 * n * total);

  sol.d = Eigen::VectorXd::Zero(n);
  for (int k = 1; k < n; ++k) {
    const double x = double(k) / n;
    sol.d[k] = sol.d[k - 1] - (x * x / 2.0 + sol.c * x) *
                                  (1.0 / theta[k - 1] - 1.0 / theta[k]);
  }
  return sol;
}

Eigen::VectorXd measure_1d(const PiecewiseSolution1D& sol,
                           const std::vector<double>& points) {
  Eigen::VectorXd z(static_cast<Eigen::Index>(points.size()));
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i] <= 0.0 || points[i] >= 1.0)
      throw std::invalid_argument("measurement points must lie in (0, 1)");
    z[static_cast<Eigen::Index>(i)] = sol.evaluate(points[i]);
  }
  return z;
}

Eigen::VectorXd log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("log grid needs 0 < lo < hi and n >= 2");
  Eigen::VectorXd grid(n);
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < n; ++i)
    grid[i] = std::pow(10.0, llo + (lhi - llo) * i / double(n - 1));
  return grid;
}

PosteriorGrid1D posterior_grid_1d(const Eigen::Vector2d& theta_hat,
                                  double sigma, double sigma_pr,
                                  const Eigen::VectorXd& theta0_grid,
                                  const Eigen::VectorXd& theta1_grid) {
  if (!(sigma > 0.0) || !(sigma_pr > 0.0))
    throw std::invalid_argument("sigma and sigma_pr must be positive");

  const Eigen::VectorXd zhat =
      measure_1d(solve_1d(theta_hat), kMeasurementPoints1D);

  PosteriorGrid1D grid;
  grid.theta0 = theta0_grid;
  grid.theta1 = theta1_grid;
  grid.density.resize(theta0_grid.size(), theta1_grid.size());
  grid.log_density.resize(theta0_grid.size(), theta1_grid.size());

  Eigen::VectorXd theta(2);
  for (Eigen::Index i = 0; i < theta0_grid.size(); ++i)
    for (Eigen::Index j = 0; j < theta1_grid.size(); ++j) {
      theta << theta0_grid[i], theta1_grid[j];
      const Eigen::VectorXd z =
          measure_1d(solve_1d(theta), kMeasurementPoints1D);
      const double ll =
          -(z - zhat).squaredNorm() / (2.0 * sigma * sigma);
      const double l0 = std::log(theta[0]), l1 = std::log(theta[1]);
      const double lp = -(l0 * l0 + l1 * l1) / (2.0 * sigma_pr * sigma_pr);
      grid.log_density(i, j) = ll + lp;
      grid.density(i, j) = std::exp(ll + lp);
    }
  return grid;
}

PosteriorGrid1D posterior_grid_1d(const Eigen::Vector2d& theta_hat,
                                  double sigma, double sigma_pr) {
  const Eigen::VectorXd grid = log_grid(1e-2, 1e2, 400);
  return posterior_grid_1d(theta_hat, sigma, sigma_pr, grid, grid);
}

}  // namespace bip
