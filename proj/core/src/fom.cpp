#include <sbmrom/fom.hpp>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <chrono>
#include <cmath>
#include <limits>

namespace sbmrom {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

FomSolution solve(const FomSystem& system, SolverKind kind) {
  FomSolution out;
  out.mu = system.mu;
  const auto start = Clock::now();
  if (kind == SolverKind::Cholesky) {
    Eigen::SimplicialLLT<SparseMatrix> llt(system.A);
    if (llt.info() != Eigen::Success) {
      throw SolverError("sparse Cholesky failed at mu = " + std::to_string(system.mu) +
                        ": operator is not positive definite (alpha too small or "
                        "classification error)");
    }
    out.T = llt.solve(system.F);
  } else {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg(system.A);
    cg.setTolerance(1e-12);
    cg.setMaxIterations(10 * system.size());
    out.T = cg.solve(system.F);
    if (cg.info() != Eigen::Success) {
      throw SolverError("conjugate gradients did not converge at mu = " +
                        std::to_string(system.mu));
    }
  }
  out.solve_seconds = seconds_since(start);

  for (int i = 0; i < system.size(); ++i) {
    if (system.constrained[i]) out.T[i] = system.F[i];
  }

  const double rhs_norm = system.F.norm();
  const double res = (system.A * out.T - system.F).norm();
  out.residual = rhs_norm > 0.0 ? res / rhs_norm : res;
  if (!(out.residual <= kResidualContract)) {
    throw SolverError("full-order residual " + std::to_string(out.residual) +
                      " exceeds contract at mu = " + std::to_string(system.mu));
  }
  return out;
}

FullOrderModel::FullOrderModel(const BackgroundMesh& mesh, EmbeddedShape shape,
                               ProblemData problem, int quadrature_order, SolverKind solver)
    : mesh_(&mesh),
      pattern_(std::make_shared<const OperatorPattern>(mesh)),
      shape_(std::move(shape)),
      problem_(std::move(problem)),
      order_(quadrature_order),
      solver_(solver) {}

FomSystem FullOrderModel::system(double mu, FomTimings* timings) const {
  auto start = Clock::now();
  const SurrogateMap surrogate = classify(*mesh_, shape_, mu, order_);
  const double t_classify = seconds_since(start);
  start = Clock::now();
  FomSystem sys = assemble(*mesh_, surrogate, problem_, *pattern_);
  if (timings) {
    timings->classify = t_classify;
    timings->assemble = seconds_since(start);
  }
  return sys;
}

FomSolution FullOrderModel::solve(double mu, FomTimings* timings) const {
  FomTimings local;
  const FomSystem sys = system(mu, &local);
  FomSolution sol = sbmrom::solve(sys, solver_);
  local.solve = sol.solve_seconds;
  if (timings) *timings = local;
  return sol;
}

double active_l2_error(const BackgroundMesh& mesh, const SurrogateMap& surrogate,
                       const Vector& discrete, const ScalarField& exact) {
  const SparseMatrix mass = assemble_mass(mesh, surrogate.element_active);
  Vector err(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) err[i] = discrete[i] - exact(mesh.node(i));
  return std::sqrt(std::max(0.0, err.dot(mass * err)));
}

std::vector<ConvergenceRow> convergence_study(const Box& box, const EmbeddedShape& shape,
                                              double mu, const ManufacturedSolution& manufactured,
                                              std::span<const double> hs, double alpha,
                                              int quadrature_order) {
  require(hs.size() >= 3, "convergence study needs at least three mesh sizes");
  for (std::size_t i = 1; i < hs.size(); ++i) {
    require(std::abs(hs[i] - 0.5 * hs[i - 1]) <= 1e-9 * hs[i - 1],
            "mesh sizes must halve at each step");
  }

  ProblemData problem;
  problem.source = manufactured.source;
  problem.dirichlet = manufactured.exact;
  problem.outer_wall = manufactured.exact;
  problem.alpha = alpha;

  std::vector<ConvergenceRow> rows;
  for (double h : hs) {
    const BackgroundMesh mesh(box, h);
    const SurrogateMap surrogate = classify(mesh, shape, mu, quadrature_order);
    const FomSolution sol = solve(assemble(mesh, surrogate, problem));
    ConvergenceRow row;
    row.h = h;
    row.nodes = mesh.num_nodes();
    row.l2_error = active_l2_error(mesh, surrogate, sol.T, manufactured.exact);
    row.rate = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                            : std::log(rows.back().l2_error / row.l2_error) /
                                  std::log(rows.back().h / h);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sbmrom
