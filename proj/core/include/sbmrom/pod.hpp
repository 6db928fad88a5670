#pragma once

#include <sbmrom/assembly.hpp>

#include <memory>
#include <optional>
#include <vector>

namespace sbmrom {

/// Columns are full-order solutions on the background node set, ordered as
/// `parameters`. The mass matrix defines the L2 inner product over the box.
struct SnapshotSet {
  Matrix S;
  std::vector<double> parameters;
  std::shared_ptr<const SparseMatrix> mass;

  int num_snapshots() const { return static_cast<int>(S.cols()); }
  int num_dofs() const { return static_cast<int>(S.rows()); }
};

/// Eigenvalues below rank_cutoff * lambda_max are treated as zero.
inline constexpr double kRankCutoff = 1e-14;

struct PodOptions {
  std::optional<int> modes;
  /// Keep the smallest m with sum_{i<=m} lambda_i / sum lambda_i >= 1 - tolerance.
  std::optional<double> energy_tolerance;
  double rank_cutoff = kRankCutoff;
};

struct PodBasis {
  Matrix modes;           ///< N_h x N^r, mass-orthonormal columns
  Vector eigenvalues;     ///< full correlation spectrum, descending, clipped at zero
  int rank = 0;           ///< number of eigenvalues above the cutoff

  int size() const { return static_cast<int>(modes.cols()); }
};

/// C_ij = T_i^T M T_j.
Matrix correlation_matrix(const Matrix& snapshots, const SparseMatrix& mass);
Matrix correlation_matrix(const SnapshotSet& snapshots);

/// Method of snapshots: eigen-decomposition of the correlation matrix, modes
/// built from the snapshot combinations and re-orthonormalized in the mass
/// inner product. The largest-magnitude entry of each mode is made positive.
PodBasis pod(const SnapshotSet& snapshots, const PodOptions& options = {});

/// Smallest mode count whose cumulative energy fraction reaches 1 - tolerance.
int modes_for_energy(const Vector& eigenvalues, double tolerance);

struct ReducedSystem {
  Matrix A;  ///< L^T A L
  Vector F;  ///< L^T F

  int size() const { return static_cast<int>(F.size()); }
};

/// Galerkin projection onto the first `modes` basis functions (all when -1).
ReducedSystem project(const FomSystem& system, const PodBasis& basis, int modes = -1);
ReducedSystem project(const FomSystem& system, const Eigen::Ref<const Matrix>& L);

/// Dense Cholesky solve of the reduced system; SolverError when singular.
Vector solve_reduced(const ReducedSystem& reduced);

/// T^r = L a using the first a.size() modes.
Vector reconstruct(const PodBasis& basis, const Vector& coefficients);

/// ||u - v||_M / ||u||_M.
double relative_l2_error(const Vector& reference, const Vector& approximation,
                         const SparseMatrix& mass);

/// Relative L2 distance from T to its mass-orthogonal projection onto the
/// first `modes` basis functions.
double l2_projection_error(const Vector& T, const PodBasis& basis, const SparseMatrix& mass,
                           int modes = -1);

/// max |(phi_i, phi_j) - delta_ij|.
double orthonormality_defect(const Matrix& modes, const SparseMatrix& mass);

}  // namespace sbmrom
