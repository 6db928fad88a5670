#include <sbmrom/pod.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace sbmrom {

Matrix correlation_matrix(const Matrix& snapshots, const SparseMatrix& mass) {
  require(snapshots.cols() > 0, "snapshot set is empty");
  require(mass.rows() == snapshots.rows(), "mass matrix does not match snapshot size");
  const Matrix weighted = mass * snapshots;
  Matrix c = snapshots.transpose() * weighted;
  // Exact symmetry; the two triangles differ only by summation order.
  return 0.5 * (c + c.transpose());
}

Matrix correlation_matrix(const SnapshotSet& snapshots) {
  require(snapshots.mass != nullptr, "snapshot set has no mass matrix");
  return correlation_matrix(snapshots.S, *snapshots.mass);
}

int modes_for_energy(const Vector& eigenvalues, double tolerance) {
  require(tolerance >= 0.0 && tolerance < 1.0, "energy tolerance must lie in [0, 1)");
  const double total = eigenvalues.sum();
  require(total > 0.0, "spectrum has no energy");
  double acc = 0.0;
  for (int m = 0; m < eigenvalues.size(); ++m) {
    acc += eigenvalues[m];
    if (acc / total >= 1.0 - tolerance) return m + 1;
  }
  return static_cast<int>(eigenvalues.size());
}

namespace {

// Two passes of modified Gram-Schmidt in the mass inner product.
void mass_orthonormalize(Matrix& modes, const SparseMatrix& mass) {
  const int n = static_cast<int>(modes.cols());
  Matrix weighted(modes.rows(), n);
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        modes.col(j) -= weighted.col(k).dot(modes.col(j)) * modes.col(k);
      }
      Vector mv = mass * modes.col(j);
      const double norm = std::sqrt(modes.col(j).dot(mv));
      if (!(norm > 0.0)) {
        throw SolverError("POD mode " + std::to_string(j) + " collapsed during orthonormalization");
      }
      modes.col(j) /= norm;
      weighted.col(j) = mv / norm;
    }
  }
}

}  // namespace

PodBasis pod(const SnapshotSet& snapshots, const PodOptions& options) {
  const int ns = snapshots.num_snapshots();
  require(ns >= 1, "snapshot set is empty");
  require(snapshots.mass != nullptr, "snapshot set has no mass matrix");

  const Matrix c = correlation_matrix(snapshots);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
  if (eig.info() != Eigen::Success) throw SolverError("correlation eigensolver failed");

  // Eigen returns ascending order.
  const Vector values = eig.eigenvalues().reverse();
  const Matrix vectors = eig.eigenvectors().rowwise().reverse();

  PodBasis basis;
  basis.eigenvalues = values.cwiseMax(0.0);
  const double lambda_max = basis.eigenvalues[0];
  require(lambda_max > 0.0, "all snapshots are zero");
  basis.rank = 0;
  while (basis.rank < ns && basis.eigenvalues[basis.rank] >= options.rank_cutoff * lambda_max) {
    ++basis.rank;
  }

  int keep = basis.rank;
  if (options.modes) {
    require(*options.modes >= 1, "number of modes must be positive");
    if (*options.modes > basis.rank) {
      throw PreconditionError("requested " + std::to_string(*options.modes) +
                              " modes but the snapshot correlation has numerical rank " +
                              std::to_string(basis.rank));
    }
    keep = *options.modes;
  } else if (options.energy_tolerance) {
    keep = std::min(basis.rank,
                    modes_for_energy(basis.eigenvalues.head(basis.rank), *options.energy_tolerance));
  }

  basis.modes.resize(snapshots.num_dofs(), keep);
  for (int i = 0; i < keep; ++i) {
    const double scale = 1.0 / (ns * std::sqrt(basis.eigenvalues[i]));
    basis.modes.col(i) = scale * (snapshots.S * vectors.col(i));
  }
  mass_orthonormalize(basis.modes, *snapshots.mass);

  for (int i = 0; i < keep; ++i) {
    Eigen::Index at = 0;
    basis.modes.col(i).cwiseAbs().maxCoeff(&at);
    if (basis.modes(at, i) < 0.0) basis.modes.col(i) *= -1.0;
  }
  return basis;
}

ReducedSystem project(const FomSystem& system, const Eigen::Ref<const Matrix>& L) {
  require(L.rows() == system.size(), "basis and system dimensions differ");
  require(L.cols() >= 1, "reduced basis must have at least one mode");
  ReducedSystem r;
  const Matrix al = system.A * L;
  r.A.noalias() = L.transpose() * al;
  r.F.noalias() = L.transpose() * system.F;
  return r;
}

ReducedSystem project(const FomSystem& system, const PodBasis& basis, int modes) {
  const int m = modes < 0 ? basis.size() : modes;
  require(m >= 1, "reduced basis must have at least one mode");
  require(m <= basis.size(), "requested " + std::to_string(m) + " modes but the basis holds " +
                                 std::to_string(basis.size()));
  return project(system, basis.modes.leftCols(m));
}

Vector solve_reduced(const ReducedSystem& reduced) {
  require(reduced.size() >= 1, "reduced system is empty");
  if (!reduced.A.allFinite() || !reduced.F.allFinite()) {
    throw SolverError("reduced system contains NaN or Inf");
  }
  Eigen::LLT<Matrix> llt(reduced.A);
  if (llt.info() != Eigen::Success) {
    throw SolverError("reduced operator is singular or indefinite (rank-deficient basis?)");
  }
  return llt.solve(reduced.F);
}

Vector reconstruct(const PodBasis& basis, const Vector& coefficients) {
  require(coefficients.size() <= basis.size(), "more coefficients than basis functions");
  return basis.modes.leftCols(coefficients.size()) * coefficients;
}

double relative_l2_error(const Vector& reference, const Vector& approximation,
                         const SparseMatrix& mass) {
  const Vector diff = reference - approximation;
  const double num = std::sqrt(std::max(0.0, diff.dot(mass * diff)));
  const double den = std::sqrt(std::max(0.0, reference.dot(mass * reference)));
  return den > 0.0 ? num / den : num;
}

double l2_projection_error(const Vector& T, const PodBasis& basis, const SparseMatrix& mass,
                           int modes) {
  const int m = modes < 0 ? basis.size() : modes;
  require(m <= basis.size(), "requested more modes than the basis holds");
  const auto L = basis.modes.leftCols(m);
  const Vector coeffs = L.transpose() * (mass * T);
  return relative_l2_error(T, L * coeffs, mass);
}

double orthonormality_defect(const Matrix& modes, const SparseMatrix& mass) {
  const Matrix gram = modes.transpose() * (mass * modes);
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace sbmrom
