#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

// Q1 finite-element machinery for the generalized Poisson problem
//   -div(a grad u) = 10  on (0,1)^2,  u = 0 on the boundary,
// with a piecewise constant on a fixed 8x8 parameter grid and the
// solution discretized on an 8x8, 16x16, or 32x32 node lattice.

namespace bip {

using ParameterVector   = Eigen::Matrix<double, 64, 1>;
using MeasurementVector = Eigen::Matrix<double, 169, 1>;
using SolutionVector    = Eigen::VectorXd;

inline constexpr int kParameterCellsPerSide = 8;
inline constexpr int kParameterCount       = 64;
inline constexpr int kMeasurementPerSide   = 13;
inline constexpr int kMeasurementCount     = 169;

/// Refinement level of the solution mesh. The parameter mesh is always 8x8;
/// the solution mesh refines it by a factor 2^level.
struct MeshLevel {
  int level = 2;

  MeshLevel() = default;
  explicit MeshLevel(int l);

  int cells_per_side() const { return kParameterCellsPerSide << level; }
  int nodes_per_side() const { return cells_per_side() + 1; }
  int node_count() const { return nodes_per_side() * nodes_per_side(); }
  int boundary_node_count() const { return 4 * cells_per_side(); }
  double h() const { return 1.0 / cells_per_side(); }
};

/// Node and cell bookkeeping on the uniform lattice. Nodes are numbered
/// lexicographically, x-fastest: n = iy*(nx+1) + ix.
class DofMap {
public:
  explicit DofMap(MeshLevel level) : level_(level) {}

  MeshLevel level() const { return level_; }

  int node(int ix, int iy) const { return iy * level_.nodes_per_side() + ix; }
  std::pair<int, int> node_coords(int n) const {
    const int nps = level_.nodes_per_side();
    return {n % nps, n / nps};
  }
  bool is_boundary_node(int n) const {
    const auto [ix, iy] = node_coords(n);
    const int nx = level_.cells_per_side();
    return ix == 0 || iy == 0 || ix == nx || iy == nx;
  }

  int cell_count() const {
    return level_.cells_per_side() * level_.cells_per_side();
  }
  /// Corner nodes of cell c, order (0,0),(1,0),(0,1),(1,1).
  std::array<int, 4> cell_nodes(int c) const {
    const int nx = level_.cells_per_side();
    const int cx = c % nx, cy = c / nx;
    return {node(cx, cy), node(cx + 1, cy), node(cx, cy + 1),
            node(cx + 1, cy + 1)};
  }

  /// Index of the 8x8 parameter cell that solution cell c falls into.
  int parameter_cell(int c) const {
    const int nx = level_.cells_per_side();
    const int f  = nx / kParameterCellsPerSide;
    const int cx = c % nx, cy = c / nx;
    return (cy / f) * kParameterCellsPerSide + (cx / f);
  }

  /// Parameter cell containing an interior point: k = 8*floor(8y) + floor(8x).
  static int parameter_cell_of_point(double x, double y);

private:
  MeshLevel level_;
};

/// Unit-coefficient Q1 element stiffness on a square cell (h-independent
/// in 2D). Node order matches DofMap::cell_nodes.
Eigen::Matrix4d local_stiffness();

/// Assembled linear system at one level: constrained boundary rows/columns
/// carry a unit diagonal and zero right-hand side.
struct SparseSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd F;
  std::vector<int> constrained_nodes;
  MeshLevel level;
};

/// Assembles A = sum_K theta_{k(K)} P_K^T A_local P_K and the load vector
/// for f == 10 (cell load h^2*10/4 per corner node), then applies the
/// homogeneous Dirichlet constraints symmetrically.
/// Throws std::invalid_argument for non-positive or non-finite theta.
SparseSystem assemble(const ParameterVector& theta, MeshLevel level);

enum class SolverKind {
  direct_cholesky,  ///< banded Cholesky factorization (default)
  pcg_ic,           ///< conjugate gradient, incomplete-Cholesky preconditioned
};

/// Solves the assembled system to a relative residual of at most 1e-10.
/// Boundary entries of the returned vector are exactly zero.
SolutionVector solve(const SparseSystem& system,
                     SolverKind kind = SolverKind::direct_cholesky);

/// Sparse point-evaluation operator: row k holds the Q1 shape function
/// values at measurement point x_k = (i/14, j/14), k = 13(i-1)+(j-1).
class MeasurementOperator {
public:
  explicit MeasurementOperator(MeshLevel level);

  MeshLevel level() const { return level_; }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix() const {
    return m_;
  }
  MeasurementVector apply(const SolutionVector& u) const;

private:
  MeshLevel level_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> m_;
};

inline MeasurementVector measure(const MeasurementOperator& m,
                                 const SolutionVector& u) {
  return m.apply(u);
}

/// Precomputed forward map theta -> z for one mesh level. All state built
/// in the constructor is immutable; concurrent apply() calls are safe as
/// long as each caller passes its own Workspace.
class ForwardOperator {
public:
  explicit ForwardOperator(MeshLevel level);

  struct Workspace {
    std::vector<double> band;
    std::vector<double> rhs;
  };
  Workspace make_workspace() const;

  MeshLevel level() const { return level_; }
  const MeasurementOperator& measurement() const { return measurement_; }

  /// One assembly + banded Cholesky solve + point evaluation.
  MeasurementVector apply(const ParameterVector& theta, Workspace& ws) const;

  /// Solution vector variant (used by tests and the CLI `forward` path).
  SolutionVector solve_nodal(const ParameterVector& theta,
                             Workspace& ws) const;

private:
  void assemble_band(const ParameterVector& theta, Workspace& ws) const;
  void factor_solve(Workspace& ws) const;

  MeshLevel level_;
  int n_ = 0;      // node count
  int kd_ = 0;     // band half-width
  int ldab_ = 0;   // band leading dimension
  // CSR-style map from banded slots to (parameter index, weight) pairs.
  std::vector<int> slot_;
  std::vector<int> slot_offset_;
  std::vector<int> entry_param_;
  std::vector<double> entry_weight_;
  std::vector<double> load_;  // constrained load vector
  MeasurementOperator measurement_;
};

}  // namespace bip
