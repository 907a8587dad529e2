#pragma once

#include <vector>

#include <Eigen/Dense>

// Analytic one-dimensional analogue of the benchmark: the generalized
// Poisson problem -(a u')' = 1 on (0,1), u(0) = u(1) = 0, with a piecewise
// constant on N equal cells, has a closed-form piecewise-quadratic
// solution. For N = 2 the posterior over (theta_0, theta_1) can be
// evaluated on a grid without sampling.

namespace bip {

/// u_k(x) = -(x^2/2 + c x)/theta_k + d_k on (k/N, (k+1)/N).
struct PiecewiseSolution1D {
  Eigen::VectorXd theta;
  double c = 0.0;
  Eigen::VectorXd d;

  double evaluate(double x) const;  // x in [0,1]
};

/// Closed-form coefficients: d_0 = 0,
/// c = -(1/(2N)) sum theta_k^-1 (2k+1) / sum theta_k^-1, the d_k by
/// telescoping the interface continuity constraints.
/// Throws std::invalid_argument for non-positive theta.
PiecewiseSolution1D solve_1d(const Eigen::VectorXd& theta);

/// Exact evaluation of the piecewise quadratic at points in (0,1).
Eigen::VectorXd measure_1d(const PiecewiseSolution1D& sol,
                           const std::vector<double>& points);

inline const std::vector<double> kMeasurementPoints1D = {0.25, 0.75};

struct PosteriorGrid1D {
  Eigen::VectorXd theta0;       // grid coordinates, first parameter
  Eigen::VectorXd theta1;       // grid coordinates, second parameter
  Eigen::MatrixXd density;      // non-normalized pi, rows theta0 x cols theta1
  Eigen::MatrixXd log_density;  // same grid, log scale
};

/// Logarithmically spaced grid over [lo, hi].
Eigen::VectorXd log_grid(double lo, double hi, int n);

/// Evaluates the non-normalized N=2 posterior on a rectangular grid. The
/// reference measurements come from the exact solution at theta_hat, at
/// x = 0.25 and x = 0.75.
PosteriorGrid1D posterior_grid_1d(const Eigen::Vector2d& theta_hat,
                                  double sigma, double sigma_pr,
                                  const Eigen::VectorXd& theta0_grid,
                                  const Eigen::VectorXd& theta1_grid);

/// Default figure grid: 400x400 log-spaced points over [1e-2, 1e2]^2.
PosteriorGrid1D posterior_grid_1d(const Eigen::Vector2d& theta_hat,
                                  double sigma, double sigma_pr = 2.0);

}  // namespace bip
