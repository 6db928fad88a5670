#include <sbmrom/fom.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cmath>

namespace sbmrom {
namespace {

class ReferenceFom : public ::testing::Test {
 protected:
  static const BackgroundMesh& mesh() {
    static const BackgroundMesh m({-2.0, 2.0, -1.0, 1.0}, 0.035);
    return m;
  }
  static const FullOrderModel& model() {
    static const FullOrderModel fom(mesh(), EmbeddedShape::rectangle_ycenter(), ProblemData{});
    return fom;
  }
};

TEST_F(ReferenceFom, ZeroDataGivesZeroSolution) {
  ProblemData zero;
  zero.source = ScalarField::constant(0.0);
  const FullOrderModel fom(mesh(), EmbeddedShape::rectangle_ycenter(), zero);
  const FomSolution sol = fom.solve(0.1);
  EXPECT_EQ(sol.T.cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(ReferenceFom, PointSymmetricAtCenteredHole) {
  const FomSolution sol = model().solve(0.0);
  const int n = mesh().num_nodes();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(sol.T[i] - sol.T[n - 1 - i]));
  EXPECT_LE(worst, 1e-10);
}

TEST_F(ReferenceFom, ResidualContractAndTimings) {
  for (double mu : {-0.5, -0.07, 0.5}) {
    FomTimings t;
    const FomSolution sol = model().solve(mu, &t);
    EXPECT_LE(sol.residual, kResidualContract);
    EXPECT_GT(sol.solve_seconds, 0.0);
    EXPECT_GT(t.classify, 0.0);
    EXPECT_GT(t.assemble, 0.0);
    EXPECT_GT(t.solve, 0.0);
    EXPECT_DOUBLE_EQ(t.total(), t.classify + t.assemble + t.solve);
    EXPECT_EQ(sol.mu, mu);
  }
}

TEST_F(ReferenceFom, DiscreteMaximumPrinciple) {
  const auto shape = EmbeddedShape::rectangle_ycenter();
  for (double mu : {-0.41, 0.0, 0.23}) {
    const SurrogateMap map = classify(mesh(), shape, mu);
    const FomSolution sol = solve(assemble(mesh(), map, ProblemData{}));
    const auto hole = std::get<RectanglePrimitive>(shape.at(mu));
    const double tmax = sol.T.maxCoeff();
    ASSERT_GT(tmax, 0.0);
    int argmax = 0;
    sol.T.maxCoeff(&argmax);
    EXPECT_FALSE(is_inside(shape, mu, mesh().node(argmax)));
    EXPECT_GT(closest_point(shape, mu, mesh().node(argmax)).distance(), 0.0);
    for (int i = 0; i < mesh().num_nodes(); ++i) {
      if (map.is_ghost(i)) continue;
      const Point q = mesh().node(i) - hole.center;
      const bool on_gamma =
          std::abs(std::abs(q.x()) - hole.half_width) < 1e-12 && std::abs(q.y()) <= hole.half_height + 1e-12 ||
          std::abs(std::abs(q.y()) - hole.half_height) < 1e-12 && std::abs(q.x()) <= hole.half_width + 1e-12;
      if (on_gamma) {
        EXPECT_LE(std::abs(sol.T[i]), 1e-2 * tmax);
      } else {
        EXPECT_GE(sol.T[i], 0.0) << "node " << i;
      }
    }
  }
}

TEST_F(ReferenceFom, ConjugateGradientsAgreeWithCholesky) {
  const FomSystem sys = model().system(0.27);
  const FomSolution direct = solve(sys, SolverKind::Cholesky);
  const FomSolution cg = solve(sys, SolverKind::ConjugateGradient);
  EXPECT_LE(cg.residual, kResidualContract);
  EXPECT_LE((direct.T - cg.T).cwiseAbs().maxCoeff(), 1e-9 * direct.T.cwiseAbs().maxCoeff());
}

TEST(Solve, IndefiniteSystemRaises) {
  FomSystem sys;
  sys.mu = 0.0;
  sys.A.resize(3, 3);
  sys.A.insert(0, 0) = 1.0;
  sys.A.insert(1, 1) = -2.0;
  sys.A.insert(2, 2) = 1.0;
  sys.F = Vector::Ones(3);
  sys.constrained.assign(3, 0);
  EXPECT_THROW(solve(sys), SolverError);
}

TEST(Solve, SingularSystemRaises) {
  FomSystem sys;
  sys.A.resize(2, 2);
  sys.A.insert(0, 0) = 1.0;
  sys.A.insert(0, 1) = 1.0;
  sys.A.insert(1, 0) = 1.0;
  sys.A.insert(1, 1) = 1.0;
  sys.F = Vector::Ones(2);
  sys.constrained.assign(2, 0);
  EXPECT_THROW(solve(sys), SolverError);
}

TEST(ConvergenceStudy, DiscHoleIsSecondOrder) {
  const Point c(0.0, 0.0);
  ManufacturedSolution ms;
  ms.exact = {[c](const Point& p) { return (p - c).squaredNorm(); },
              [c](const Point& p) { return Point(2.0 * (p - c)); }};
  ms.source = ScalarField::constant(-4.0);
  const std::array<double, 3> hs = {0.14, 0.07, 0.035};
  const auto rows = convergence_study({-2.0, 2.0, -1.0, 1.0}, EmbeddedShape::disc(c, 0.5), 0.5,
                                      ms, hs);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(std::isnan(rows[0].rate));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_GE(rows[k].rate, 1.8);
    EXPECT_LE(rows[k].l2_error, 1.05 * rows[k - 1].l2_error);
    EXPECT_GT(rows[k].nodes, rows[k - 1].nodes);
  }
}

TEST(ConvergenceStudy, LinearSolutionIsExactOnEveryMesh) {
  ManufacturedSolution ms;
  ms.exact = ScalarField::affine(1.0, -0.4, 0.9);
  ms.source = ScalarField::constant(0.0);
  const std::array<double, 3> hs = {0.2, 0.1, 0.05};
  const auto rows = convergence_study({-1.0, 1.0, -1.0, 1.0},
                                      EmbeddedShape::disc({0.1, 0.0}, 0.45), 0.45, ms, hs);
  for (const auto& row : rows) EXPECT_LE(row.l2_error, 1e-11);
}

TEST(ConvergenceStudy, RejectsBadSizeLists) {
  ManufacturedSolution ms{ScalarField::constant(0.0), ScalarField::constant(0.0)};
  const auto shape = EmbeddedShape::disc({0.0, 0.0}, 0.5);
  const std::array<double, 2> two = {0.1, 0.05};
  const std::array<double, 3> not_halving = {0.1, 0.06, 0.03};
  EXPECT_THROW(convergence_study({-1, 1, -1, 1}, shape, 0.5, ms, two), PreconditionError);
  EXPECT_THROW(convergence_study({-1, 1, -1, 1}, shape, 0.5, ms, not_halving),
               PreconditionError);
}

TEST(ActiveL2Error, MeasuresOnlyActiveElements) {
  const BackgroundMesh mesh({-1.0, 1.0, -1.0, 1.0}, 0.1);
  const auto shape = EmbeddedShape::disc({0.0, 0.0}, 0.5);
  const SurrogateMap map = classify(mesh, shape, 0.5);
  const ScalarField one = ScalarField::constant(1.0);
  Vector zero = Vector::Zero(mesh.num_nodes());
  double active_area = 0.0;
  for (int e : map.active_elements) active_area += mesh.element(e).area;
  EXPECT_NEAR(active_l2_error(mesh, map, zero, one), std::sqrt(active_area), 1e-12);
  // Ghost values never enter the error.
  Vector exact = Vector::Ones(mesh.num_nodes());
  for (int g : map.ghost_nodes) exact[g] = 1e6;
  EXPECT_NEAR(active_l2_error(mesh, map, exact, one), 0.0, 1e-12);
}

}  // namespace
}  // namespace sbmrom
