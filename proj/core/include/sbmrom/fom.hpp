#pragma once

#include <sbmrom/assembly.hpp>

#include <memory>
#include <span>
#include <vector>

namespace sbmrom {

enum class SolverKind { Cholesky, ConjugateGradient };

/// Relative residual every full-order solve must meet.
inline constexpr double kResidualContract = 1e-10;

struct FomSolution {
  double mu = 0.0;
  Vector T;
  double solve_seconds = 0.0;
  double residual = 0.0;  ///< ||A T - F|| / ||F||
};

/// Solves A T = F. Sparse Cholesky by default; the CG variant runs to a
/// relative tolerance of 1e-12. Throws SolverError if the operator is not
/// positive definite or the residual contract fails.
FomSolution solve(const FomSystem& system, SolverKind kind = SolverKind::Cholesky);

/// Per-query timings of the full-order pipeline, in seconds.
struct FomTimings {
  double classify = 0.0;
  double assemble = 0.0;
  double solve = 0.0;

  double total() const { return classify + assemble + solve; }
};

/// Classification, assembly and solve for one parameter value against a fixed
/// background mesh. Thread-compatible: concurrent calls only read shared state.
class FullOrderModel {
 public:
  FullOrderModel(const BackgroundMesh& mesh, EmbeddedShape shape, ProblemData problem,
                 int quadrature_order = kDefaultQuadratureOrder,
                 SolverKind solver = SolverKind::Cholesky);

  const BackgroundMesh& mesh() const { return *mesh_; }
  const EmbeddedShape& shape() const { return shape_; }
  const ProblemData& problem() const { return problem_; }
  int quadrature_order() const { return order_; }

  /// Classification plus assembly.
  FomSystem system(double mu, FomTimings* timings = nullptr) const;
  FomSolution solve(double mu, FomTimings* timings = nullptr) const;

 private:
  const BackgroundMesh* mesh_;
  std::shared_ptr<const OperatorPattern> pattern_;
  EmbeddedShape shape_;
  ProblemData problem_;
  int order_;
  SolverKind solver_;
};

struct ManufacturedSolution {
  ScalarField exact;
  ScalarField source;  ///< -lap(exact)
};

struct ConvergenceRow {
  double h = 0.0;
  int nodes = 0;
  double l2_error = 0.0;
  double rate = 0.0;  ///< log(e_prev / e) / log(h_prev / h); NaN on the first row
};

/// L2 error of the discrete solution against the nodal interpolant of the
/// exact solution, measured with the mass matrix of the active elements.
double active_l2_error(const BackgroundMesh& mesh, const SurrogateMap& surrogate,
                       const Vector& discrete, const ScalarField& exact);

/// Solves the manufactured problem on successively halved meshes of `box`.
std::vector<ConvergenceRow> convergence_study(const Box& box, const EmbeddedShape& shape,
                                              double mu, const ManufacturedSolution& manufactured,
                                              std::span<const double> hs, double alpha = 4.0,
                                              int quadrature_order = kDefaultQuadratureOrder);

}  // namespace sbmrom
