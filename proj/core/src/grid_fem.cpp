#include "bip/grid_fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>

#include <lapacke.h>

#include <Eigen/IterativeLinearSolvers>

namespace bip {

namespace {

void check_theta(const ParameterVector& theta) {
  for (int k = 0; k < kParameterCount; ++k)
    if (!(theta[k] > 0.0) || !std::isfinite(theta[k]))
      throw std::invalid_argument(
          "parameter vector entries must be positive and finite");
}

constexpr double kLoad = 10.0;

}  // namespace

MeshLevel::MeshLevel(int l) : level(l) {
  if (l < 0 || l > 2)
    throw std::invalid_argument("mesh level must be 0, 1, or 2");
}

int DofMap::parameter_cell_of_point(double x, double y) {
  const int ix = std::clamp(static_cast<int>(std::floor(8 * x)), 0, 7);
  const int iy = std::clamp(static_cast<int>(std::floor(8 * y)), 0, 7);
  return 8 * iy + ix;
}

Eigen::Matrix4d local_stiffness() {
  // Exact integrals of grad(phi_i).grad(phi_j) over the unit square for
  // bilinear shape functions; scale-free in 2D.
  Eigen::Matrix4d k;
  const double d = 2.0 / 3.0, e = -1.0 / 6.0, o = -1.0 / 3.0;
  k << d, e, e, o,
       e, d, o, e,
       e, o, d, e,
       o, e, e, d;
  return k;
}

SparseSystem assemble(const ParameterVector& theta, MeshLevel level) {
  check_theta(theta);

  const DofMap dofs(level);
  const int n = level.node_count();
  const double h = level.h();
  const Eigen::Matrix4d k_local = local_stiffness();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(16) * dofs.cell_count() + n);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n);

  for (int c = 0; c < dofs.cell_count(); ++c) {
    const auto nodes = dofs.cell_nodes(c);
    const double coeff = theta[dofs.parameter_cell(c)];
    for (int i = 0; i < 4; ++i) {
      if (dofs.is_boundary_node(nodes[i])) continue;
      load[nodes[i]] += h * h * kLoad / 4.0;
      for (int j = 0; j < 4; ++j) {
        if (dofs.is_boundary_node(nodes[j])) continue;
        triplets.emplace_back(nodes[i], nodes[j], coeff * k_local(i, j));
      }
    }
  }

  SparseSystem system;
  system.level = level;
  for (int node = 0; node < n; ++node)
    if (dofs.is_boundary_node(node)) {
      system.constrained_nodes.push_back(node);
      triplets.emplace_back(node, node, 1.0);
    }

  system.A.resize(n, n);
  system.A.setFromTriplets(triplets.begin(), triplets.end());
  system.F = std::move(load);
  return system;
}

namespace {

SolutionVector solve_banded(const SparseSystem& system) {
  const int n = static_cast<int>(system.A.rows());
  int kd = 0;
  for (int col = 0; col < system.A.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.A, col); it;
         ++it)
      kd = std::max(kd, std::abs(static_cast<int>(it.row()) - col));

  const int ldab = kd + 1;
  std::vector<double> band(static_cast<size_t>(ldab) * n, 0.0);
  for (int col = 0; col < system.A.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.A, col); it;
         ++it)
      if (it.row() >= col)
        band[static_cast<size_t>(col) * ldab + (it.row() - col)] = it.value();

  SolutionVector x = system.F;
  const int info_f =
      LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', n, kd, band.data(), ldab);
  if (info_f != 0)
    throw std::runtime_error("banded Cholesky factorization failed (matrix "
                             "not positive definite)");
  LAPACKE_dpbtrs(LAPACK_COL_MAJOR, 'L', n, kd, 1, band.data(), ldab, x.data(),
                 n);
  return x;
}

SolutionVector solve_pcg(const SparseSystem& system) {
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                           Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
  cg.setTolerance(1e-12);
  cg.compute(system.A);
  if (cg.info() != Eigen::Success)
    throw std::runtime_error("incomplete-Cholesky setup failed");
  SolutionVector x = cg.solve(system.F);
  if (cg.info() != Eigen::Success)
    throw std::runtime_error("preconditioned CG did not converge");
  return x;
}

}  // namespace

SolutionVector solve(const SparseSystem& system, SolverKind kind) {
  SolutionVector x = (kind == SolverKind::direct_cholesky)
                         ? solve_banded(system)
                         : solve_pcg(system);

  const double f_norm = system.F.norm();
  const double residual = (system.A * x - system.F).norm();
  if (residual > 1e-10 * std::max(f_norm, 1e-300))
    throw std::runtime_error("linear solve exceeded the residual tolerance");

  for (const int node : system.constrained_nodes) x[node] = 0.0;
  return x;
}

MeasurementOperator::MeasurementOperator(MeshLevel level) : level_(level) {
  const DofMap dofs(level);
  const int nx = level.cells_per_side();
  const double h = level.h();

  std::vector<Eigen::Triplet<double>> triplets;
  for (int j = 1; j <= kMeasurementPerSide; ++j)
    for (int i = 1; i <= kMeasurementPerSide; ++i) {
      const int row = kMeasurementPerSide * (i - 1) + (j - 1);
      const double x = i / 14.0, y = j / 14.0;
      const int cx = std::min(static_cast<int>(std::floor(x / h)), nx - 1);
      const int cy = std::min(static_cast<int>(std::floor(y / h)), nx - 1);
      const double xi = x / h - cx, eta = y / h - cy;
      const double w[4] = {(1 - xi) * (1 - eta), xi * (1 - eta),
                           (1 - xi) * eta, xi * eta};
      const int nodes[4] = {dofs.node(cx, cy), dofs.node(cx + 1, cy),
                            dofs.node(cx, cy + 1), dofs.node(cx + 1, cy + 1)};
      for (int v = 0; v < 4; ++v)
        if (w[v] != 0.0) triplets.emplace_back(row, nodes[v], w[v]);
    }

  m_.resize(kMeasurementCount, level.node_count());
  m_.setFromTriplets(triplets.begin(), triplets.end());
  m_.makeCompressed();
}

MeasurementVector MeasurementOperator::apply(const SolutionVector& u) const {
  if (u.size() != m_.cols())
    throw std::invalid_argument("solution vector size does not match the "
                                "measurement operator");
  return m_ * u;
}

ForwardOperator::ForwardOperator(MeshLevel level)
    : level_(level), measurement_(level) {
  const DofMap dofs(level);
  const int nx = level.cells_per_side();
  n_ = level.node_count();
  kd_ = nx + 2;
  ldab_ = kd_ + 1;
  const double h = level.h();
  const Eigen::Matrix4d k_local = local_stiffness();

  // Gather the per-parameter weights for every banded slot, lower triangle
  // only. Boundary rows keep a unit diagonal.
  std::map<int, std::map<int, double>> slot_weights;
  load_ = std::vector<double>(n_, 0.0);

  for (int c = 0; c < dofs.cell_count(); ++c) {
    const auto nodes = dofs.cell_nodes(c);
    const int param = dofs.parameter_cell(c);
    for (int i = 0; i < 4; ++i) {
      if (dofs.is_boundary_node(nodes[i])) continue;
      load_[nodes[i]] += h * h * kLoad / 4.0;
      for (int j = 0; j < 4; ++j) {
        if (dofs.is_boundary_node(nodes[j])) continue;
        const int r = std::max(nodes[i], nodes[j]);
        const int col = std::min(nodes[i], nodes[j]);
        if (nodes[i] < nodes[j]) continue;  // lower triangle once
        slot_weights[col * ldab_ + (r - col)][param] += k_local(i, j);
      }
    }
  }
  for (int node = 0; node < n_; ++node)
    if (dofs.is_boundary_node(node))
      slot_weights[node * ldab_][-1] = 1.0;  // param -1: constant term

  slot_offset_.push_back(0);
  for (const auto& [slot, weights] : slot_weights) {
    slot_.push_back(slot);
    for (const auto& [param, weight] : weights) {
      entry_param_.push_back(param);
      entry_weight_.push_back(weight);
    }
    slot_offset_.push_back(static_cast<int>(entry_param_.size()));
  }
}

ForwardOperator::Workspace ForwardOperator::make_workspace() const {
  Workspace ws;
  ws.band.assign(static_cast<size_t>(ldab_) * n_, 0.0);
  ws.rhs.assign(n_, 0.0);
  return ws;
}

void ForwardOperator::assemble_band(const ParameterVector& theta,
                                    Workspace& ws) const {
  std::memset(ws.band.data(), 0, ws.band.size() * sizeof(double));
  const int n_slots = static_cast<int>(slot_.size());
  for (int s = 0; s < n_slots; ++s) {
    double value = 0.0;
    for (int e = slot_offset_[s]; e < slot_offset_[s + 1]; ++e) {
      const int p = entry_param_[e];
      value += (p >= 0 ? theta[p] : 1.0) * entry_weight_[e];
    }
    ws.band[slot_[s]] = value;
  }
  std::memcpy(ws.rhs.data(), load_.data(), load_.size() * sizeof(double));
}

void ForwardOperator::factor_solve(Workspace& ws) const {
  const int info =
      LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', n_, kd_, ws.band.data(), ldab_);
  if (info != 0)
    throw std::runtime_error("banded Cholesky factorization failed");
  LAPACKE_dpbtrs(LAPACK_COL_MAJOR, 'L', n_, kd_, 1, ws.band.data(), ldab_,
                 ws.rhs.data(), n_);
}

MeasurementVector ForwardOperator::apply(const ParameterVector& theta,
                                         Workspace& ws) const {
  check_theta(theta);
  assemble_band(theta, ws);
  factor_solve(ws);

  MeasurementVector z;
  const auto& m = measurement_.matrix();
  for (int row = 0; row < kMeasurementCount; ++row) {
    double value = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m,
                                                                        row);
         it; ++it)
      value += it.value() * ws.rhs[it.col()];
    z[row] = value;
  }
  return z;
}

SolutionVector ForwardOperator::solve_nodal(const ParameterVector& theta,
                                            Workspace& ws) const {
  check_theta(theta);
  assemble_band(theta, ws);
  factor_solve(ws);
  return Eigen::Map<const Eigen::VectorXd>(ws.rhs.data(), n_);
}

}  // namespace bip
