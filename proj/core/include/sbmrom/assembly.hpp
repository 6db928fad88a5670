#pragma once

#include <sbmrom/geometry.hpp>
#include <sbmrom/mesh.hpp>
#include <sbmrom/surrogate.hpp>

#include <array>
#include <vector>

namespace sbmrom {

/// Data of -lap(T) = f in the domain, T = g_D on the hole boundary and
/// T = outer_wall on the background box boundary.
struct ProblemData {
  ScalarField source = ScalarField::constant(1.0);
  ScalarField dirichlet = ScalarField::constant(0.0);
  ScalarField outer_wall = ScalarField::constant(0.0);
  /// Nitsche penalty.
  double alpha = 4.0;
};

/// Below this distance the (n . n_tilde) / |d| term is dropped.
inline constexpr double kZeroDistance = 1e-12;

/// Full-order system A(mu) T = F(mu) on the fixed background node set.
///
/// Ghost and outer-boundary DOFs are constrained: their rows and columns are
/// replaced by the identity and F carries the prescribed value there.
struct FomSystem {
  double mu = 0.0;
  SparseMatrix A;
  Vector F;
  std::vector<char> constrained;

  int size() const { return static_cast<int>(F.size()); }
  int num_free() const;
};

/// Local contributions of one surrogate edge, split by term so they can be
/// inspected individually.
struct EdgeContribution {
  Eigen::Matrix3d consistency = Eigen::Matrix3d::Zero();  ///< -<w + grad w.d, grad T.n~>
  Eigen::Matrix3d adjoint = Eigen::Matrix3d::Zero();      ///< -<grad w.n~, T + grad T.d>
  Eigen::Matrix3d normal_shift = Eigen::Matrix3d::Zero(); ///< <grad w.d, (n.n~)/|d| grad T.d>
  Eigen::Matrix3d penalty = Eigen::Matrix3d::Zero();      ///< <alpha/h (w + grad w.d), T + grad T.d>
  Eigen::Vector3d load = Eigen::Vector3d::Zero();

  Eigen::Matrix3d matrix() const { return consistency + adjoint + normal_shift + penalty; }
};

/// Compressed-column pattern of every P1 coupling on the background mesh,
/// with the storage slot and the stiffness matrix of each element. Built once
/// per mesh and shared by all parameter values.
class OperatorPattern {
 public:
  explicit OperatorPattern(const BackgroundMesh& mesh);

  int size() const { return static_cast<int>(outer_.size()) - 1; }
  int nonzeros() const { return static_cast<int>(inner_.size()); }
  const std::vector<int>& outer() const { return outer_; }
  const std::vector<int>& inner() const { return inner_; }
  /// Slot of entry (row = nodes[a], col = nodes[b]) at index 3 * b + a.
  const std::array<int, 9>& element_slots(int element) const { return slots_[element]; }
  const Eigen::Matrix3d& stiffness(int element) const { return stiffness_[element]; }

 private:
  std::vector<int> outer_;
  std::vector<int> inner_;
  std::vector<std::array<int, 9>> slots_;
  std::vector<Eigen::Matrix3d> stiffness_;
};

EdgeContribution surrogate_edge_terms(const P1Element& element,
                                      const std::array<Point, 3>& vertices,
                                      const SurrogateEdge& edge, const ProblemData& problem);

FomSystem assemble(const BackgroundMesh& mesh, const SurrogateMap& surrogate,
                   const ProblemData& problem, const OperatorPattern& pattern);

/// Convenience overload that builds the pattern on the fly.
FomSystem assemble(const BackgroundMesh& mesh, const SurrogateMap& surrogate,
                   const ProblemData& problem);

struct SymmetryReport {
  double max_asymmetry = 0.0;  ///< max |A_ij - A_ji| over free i, j
  double max_entry = 0.0;      ///< max |A_ij| over free i, j

  double relative() const { return max_entry > 0.0 ? max_asymmetry / max_entry : 0.0; }
};

SymmetryReport free_block_symmetry_check(const FomSystem& system);

}  // namespace sbmrom
