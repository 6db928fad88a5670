#include <sbmrom/fom.hpp>
#include <sbmrom/pod.hpp>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <memory>
#include <random>

namespace sbmrom {
namespace {

struct SmallProblem {
  BackgroundMesh mesh{{-1.0, 1.0, -1.0, 1.0}, 0.1};
  FullOrderModel fom{mesh, EmbeddedShape::disc({0.05, 0.0}, ParameterRange{0.2, 0.6}),
                     ProblemData{}};
  std::shared_ptr<const SparseMatrix> mass =
      std::make_shared<const SparseMatrix>(assemble_mass(mesh));

  SnapshotSet snapshots(const std::vector<double>& mus) const {
    SnapshotSet s;
    s.S.resize(mesh.num_nodes(), static_cast<Eigen::Index>(mus.size()));
    for (std::size_t k = 0; k < mus.size(); ++k) s.S.col(k) = fom.solve(mus[k]).T;
    s.parameters = mus;
    s.mass = mass;
    return s;
  }
};

const SmallProblem& small() {
  static const SmallProblem p;
  return p;
}

std::vector<double> spread(int n, double lo = 0.2, double hi = 0.6) {
  std::vector<double> mus;
  for (int k = 0; k < n; ++k) mus.push_back(lo + (hi - lo) * (k + 0.5) / n);
  return mus;
}

// Element-wise quadrature of (u, v)_L2 with the edge-midpoint rule, exact for
// products of P1 fields.
double l2_inner_by_quadrature(const BackgroundMesh& mesh, const Vector& u, const Vector& v) {
  double sum = 0.0;
  for (const P1Element& el : mesh.elements()) {
    for (int k = 0; k < 3; ++k) {
      const int a = el.nodes[k], b = el.nodes[(k + 1) % 3];
      sum += el.area / 3.0 * (0.5 * (u[a] + u[b])) * (0.5 * (v[a] + v[b]));
    }
  }
  return sum;
}

Matrix symmetric_sqrt(const SparseMatrix& mass) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig{Matrix(mass)};
  return eig.operatorSqrt();
}

// sin of the largest principal angle between two Euclidean-orthonormal bases.
double max_subspace_sine(const Matrix& U, const Matrix& V) {
  const Matrix residual = V - U * (U.transpose() * V);
  return Eigen::JacobiSVD<Matrix>(residual).singularValues()[0];
}

TEST(CorrelationMatrix, MatchesQuadratureOracle) {
  const SnapshotSet s = small().snapshots({0.21, 0.33, 0.4, 0.47, 0.58});
  const Matrix C = correlation_matrix(s);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double want = l2_inner_by_quadrature(small().mesh, s.S.col(i), s.S.col(j));
      EXPECT_NEAR(C(i, j), want, 1e-13 * std::abs(C(0, 0)));
    }
  }
  EXPECT_EQ((C - C.transpose()).cwiseAbs().maxCoeff(), 0.0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(C);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12 * eig.eigenvalues().maxCoeff());
}

TEST(CorrelationMatrix, RejectsEmptySet) {
  EXPECT_THROW(correlation_matrix(Matrix(small().mesh.num_nodes(), 0), *small().mass),
               PreconditionError);
  SnapshotSet empty;
  empty.S.resize(small().mesh.num_nodes(), 0);
  empty.mass = small().mass;
  EXPECT_THROW(pod(empty), PreconditionError);
}

TEST(Pod, SingleSnapshot) {
  const SnapshotSet s = small().snapshots({0.3});
  const Matrix C = correlation_matrix(s);
  const Vector& T = s.S.col(0);
  const double norm2 = T.dot(*s.mass * T);
  ASSERT_EQ(C.rows(), 1);
  EXPECT_NEAR(C(0, 0), norm2, 1e-14 * norm2);
  const PodBasis basis = pod(s);
  EXPECT_EQ(basis.rank, 1);
  ASSERT_EQ(basis.size(), 1);
  EXPECT_NEAR(basis.eigenvalues[0], norm2, 1e-14 * norm2);
  EXPECT_LT((basis.modes.col(0) - T / std::sqrt(norm2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Pod, DuplicatedSnapshotsHaveRankOne) {
  SnapshotSet s = small().snapshots({0.3, 0.3, 0.3});
  const PodBasis basis = pod(s);
  EXPECT_EQ(basis.rank, 1);
  EXPECT_EQ(basis.size(), 1);
  EXPECT_THROW(pod(s, PodOptions{.modes = 2}), PreconditionError);
}

TEST(Pod, ModesBeyondRankListsRank) {
  const SnapshotSet s = small().snapshots({0.3, 0.3, 0.5});
  try {
    pod(s, PodOptions{.modes = 3});
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("rank 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(pod(s, PodOptions{.modes = 0}), PreconditionError);
}

TEST(Pod, DegenerateSpectrumSpansSnapshots) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g;
  const SparseMatrix& M = *small().mass;
  const int n = small().mesh.num_nodes();
  Vector a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = g(rng);
    b[i] = g(rng);
  }
  b -= (a.dot(M * b) / a.dot(M * a)) * a;
  b *= std::sqrt(a.dot(M * a) / b.dot(M * b));
  SnapshotSet s;
  s.S.resize(n, 2);
  s.S << a, b;
  s.mass = small().mass;
  const PodBasis basis = pod(s);
  ASSERT_EQ(basis.size(), 2);
  EXPECT_NEAR(basis.eigenvalues[0], basis.eigenvalues[1], 1e-10 * basis.eigenvalues[0]);
  EXPECT_LE(l2_projection_error(a, basis, M), 1e-10);
  EXPECT_LE(l2_projection_error(b, basis, M), 1e-10);
}

TEST(Pod, MatchesWeightedSvdOracle) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.2, 0.6);
  std::vector<double> mus;
  for (int k = 0; k < 8; ++k) mus.push_back(u(rng));
  const SnapshotSet s = small().snapshots(mus);
  const PodBasis basis = pod(s);
  const Matrix W = symmetric_sqrt(*s.mass);
  Eigen::JacobiSVD<Matrix> svd(W * s.S, Eigen::ComputeThinU);
  const int r = basis.size();
  for (int i = 0; i < r; ++i) {
    const double sigma2 = svd.singularValues()[i] * svd.singularValues()[i];
    EXPECT_NEAR(basis.eigenvalues[i], sigma2, 1e-10 * basis.eigenvalues[0]);
  }
  // Compare leading subspaces where the spectrum is well separated.
  for (int k = 1; k <= std::min(r, 4); ++k) {
    EXPECT_LE(max_subspace_sine(svd.matrixU().leftCols(k), W * basis.modes.leftCols(k)), 1e-8)
        << "k = " << k;
  }
}

TEST(Pod, OrthonormalSortedAndSignFixed) {
  const SnapshotSet s = small().snapshots(spread(20));
  const PodBasis basis = pod(s);
  EXPECT_LE(orthonormality_defect(basis.modes, *s.mass), 1e-8);
  for (int i = 1; i < basis.eigenvalues.size(); ++i) {
    EXPECT_LE(basis.eigenvalues[i], basis.eigenvalues[i - 1]);
    EXPECT_GE(basis.eigenvalues[i], 0.0);
  }
  for (int i = 0; i < basis.size(); ++i) {
    Eigen::Index at = 0;
    basis.modes.col(i).cwiseAbs().maxCoeff(&at);
    EXPECT_GT(basis.modes(at, i), 0.0);
  }
}

TEST(Pod, EnergyTolerance) {
  const SnapshotSet s = small().snapshots(spread(12));
  const PodBasis full = pod(s);
  const PodBasis cut = pod(s, PodOptions{.energy_tolerance = 1e-6});
  const int m = cut.size();
  ASSERT_GE(m, 1);
  const Vector lam = full.eigenvalues;
  EXPECT_GE(lam.head(m).sum() / lam.sum(), 1.0 - 1e-6);
  if (m > 1) EXPECT_LT(lam.head(m - 1).sum() / lam.sum(), 1.0 - 1e-6);
  EXPECT_EQ(modes_for_energy(Vector::Ones(4), 0.5), 2);
  EXPECT_EQ(modes_for_energy(Vector::Ones(4), 0.0), 4);
  EXPECT_THROW(modes_for_energy(Vector::Ones(4), 1.0), PreconditionError);
}

TEST(Projection, Identities) {
  const SnapshotSet s = small().snapshots(spread(6));
  const PodBasis basis = pod(s);
  const SparseMatrix& M = *s.mass;
  const Vector inside = basis.modes * Vector::LinSpaced(basis.size(), 1.0, 2.0);
  EXPECT_LE(l2_projection_error(inside, basis, M), 1e-10);

  std::mt19937_64 rng(53);
  std::normal_distribution<double> g;
  Vector v(s.num_dofs());
  for (auto& x : v) x = g(rng);
  v -= basis.modes * (basis.modes.transpose() * (M * v));
  v -= basis.modes * (basis.modes.transpose() * (M * v));
  EXPECT_NEAR(l2_projection_error(v, basis, M), 1.0, 1e-10);
}

TEST(Projection, OneModeReproducesItsSnapshot) {
  const double mu = 0.41;
  const SnapshotSet s = small().snapshots({mu});
  const PodBasis basis = pod(s);
  const FomSystem sys = small().fom.system(mu);
  const Vector rom = reconstruct(basis, solve_reduced(project(sys, basis, 1)));
  EXPECT_LE(relative_l2_error(s.S.col(0), rom, *s.mass), 1e-8);
}

TEST(Projection, FullOrthogonalBasisRecoversFom) {
  const FomSystem sys = small().fom.system(0.35);
  const Vector reference = solve(sys).T;
  std::mt19937_64 rng(59);
  std::normal_distribution<double> g;
  Matrix random(sys.size(), sys.size());
  for (Eigen::Index k = 0; k < random.size(); ++k) random.data()[k] = g(rng);
  const Matrix Q = Eigen::HouseholderQR<Matrix>(random).householderQ();
  const ReducedSystem r = project(sys, Q);
  const Vector rebuilt = Q * solve_reduced(r);
  EXPECT_LE((rebuilt - reference).cwiseAbs().maxCoeff(), 1e-10 * reference.cwiseAbs().maxCoeff());
}

TEST(Projection, ReducedOperatorSymmetric) {
  const SnapshotSet s = small().snapshots(spread(10));
  const PodBasis basis = pod(s);
  const ReducedSystem r = project(small().fom.system(0.44), basis);
  EXPECT_EQ(r.size(), basis.size());
  EXPECT_TRUE(r.A.allFinite());
  EXPECT_LE((r.A - r.A.transpose()).cwiseAbs().maxCoeff(), 1e-12 * r.A.cwiseAbs().maxCoeff());
}

TEST(Projection, RejectsZeroOrTooManyModes) {
  const SnapshotSet s = small().snapshots({0.3, 0.5});
  const PodBasis basis = pod(s);
  const FomSystem sys = small().fom.system(0.4);
  EXPECT_THROW(project(sys, basis, 0), PreconditionError);
  EXPECT_THROW(project(sys, basis, 3), PreconditionError);
  EXPECT_THROW(reconstruct(basis, Vector::Ones(3)), PreconditionError);
}

TEST(SolveReduced, SingularOperatorRaises) {
  ReducedSystem r;
  r.A = Matrix::Zero(2, 2);
  r.A(0, 0) = 1.0;
  r.F = Vector::Ones(2);
  EXPECT_THROW(solve_reduced(r), SolverError);
  r.A(1, 1) = std::nan("");
  EXPECT_THROW(solve_reduced(r), SolverError);
}

TEST(Rom, GalerkinReproductionOnTrainingSet) {
  const std::vector<double> mus = spread(10);
  const SnapshotSet s = small().snapshots(mus);
  const PodBasis basis = pod(s);
  ASSERT_EQ(basis.size(), basis.rank);
  for (std::size_t k = 0; k < mus.size(); ++k) {
    const Vector rom =
        reconstruct(basis, solve_reduced(project(small().fom.system(mus[k]), basis)));
    EXPECT_LE(relative_l2_error(s.S.col(k), rom, *s.mass), 1e-8) << "mu = " << mus[k];
  }
}

TEST(Rom, ProjectionNeverWorseThanGalerkin) {
  const SnapshotSet s = small().snapshots(spread(15));
  const PodBasis basis = pod(s);
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.2, 0.6);
  for (int trial = 0; trial < 8; ++trial) {
    const double mu = u(rng);
    const FomSystem sys = small().fom.system(mu);
    const Vector T = solve(sys).T;
    for (int m = 1; m <= basis.size(); ++m) {
      const Vector rom = reconstruct(basis, solve_reduced(project(sys, basis, m)));
      EXPECT_LE(l2_projection_error(T, basis, *s.mass, m),
                relative_l2_error(T, rom, *s.mass) + 1e-12);
    }
  }
}

TEST(RelativeL2Error, Basics) {
  const SparseMatrix& M = *small().mass;
  const Vector one = Vector::Ones(small().mesh.num_nodes());
  EXPECT_EQ(relative_l2_error(one, one, M), 0.0);
  EXPECT_NEAR(relative_l2_error(one, Vector::Zero(one.size()), M), 1.0, 1e-15);
  EXPECT_NEAR(relative_l2_error(one, 1.5 * one, M), 0.5, 1e-14);
}

}  // namespace
}  // namespace sbmrom
