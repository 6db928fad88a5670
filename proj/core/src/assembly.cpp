#include <sbmrom/assembly.hpp>

#include <algorithm>
#include <cmath>

namespace sbmrom {

int FomSystem::num_free() const {
  return static_cast<int>(std::count(constrained.begin(), constrained.end(), 0));
}

EdgeContribution surrogate_edge_terms(const P1Element& element,
                                      const std::array<Point, 3>& vertices,
                                      const SurrogateEdge& edge, const ProblemData& problem) {
  EdgeContribution out;
  const Point& nt = edge.normal;
  const double penalty = problem.alpha / edge.h_perp;
  const Eigen::Vector3d grad_n = element.gradients * nt;

  for (const QuadraturePoint& qp : edge.points) {
    const BoundaryFrame& frame = qp.frame;
    const double w = qp.weight;
    const Eigen::Vector3d phi = element.barycentric(vertices, qp.position);
    const Eigen::Vector3d grad_d = element.gradients * frame.d;
    const Eigen::Vector3d shifted = phi + grad_d;  // w + grad w . d
    const double dist = frame.distance();

    out.consistency.noalias() -= w * shifted * grad_n.transpose();
    out.adjoint.noalias() -= w * grad_n * shifted.transpose();
    if (dist >= kZeroDistance) {
      const double factor = frame.normal.dot(nt) / dist;
      out.normal_shift.noalias() += (w * factor) * grad_d * grad_d.transpose();
    }
    out.penalty.noalias() += (w * penalty) * shifted * shifted.transpose();

    const DirichletSample g = dirichlet_data(problem.dirichlet, frame);
    out.load -= w * g.value * grad_n;
    out.load -= (w * g.tangential_derivative * frame.tangent.dot(nt)) * grad_d;
    out.load += (w * penalty * g.value) * shifted;
  }
  return out;
}

OperatorPattern::OperatorPattern(const BackgroundMesh& mesh) {
  const int n = mesh.num_nodes();
  std::vector<std::vector<int>> columns(n);
  for (const P1Element& el : mesh.elements()) {
    for (int a : el.nodes) {
      for (int b : el.nodes) columns[b].push_back(a);
    }
  }
  outer_.assign(n + 1, 0);
  for (int j = 0; j < n; ++j) {
    auto& col = columns[j];
    std::sort(col.begin(), col.end());
    col.erase(std::unique(col.begin(), col.end()), col.end());
    outer_[j + 1] = outer_[j] + static_cast<int>(col.size());
  }
  inner_.reserve(outer_[n]);
  for (const auto& col : columns) inner_.insert(inner_.end(), col.begin(), col.end());

  slots_.resize(mesh.num_elements());
  stiffness_.reserve(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    stiffness_.push_back(element_stiffness(mesh.element(e)));
    const auto& nodes = mesh.element(e).nodes;
    for (int b = 0; b < 3; ++b) {
      const auto first = inner_.begin() + outer_[nodes[b]];
      const auto last = inner_.begin() + outer_[nodes[b] + 1];
      for (int a = 0; a < 3; ++a) {
        slots_[e][3 * b + a] =
            static_cast<int>(std::lower_bound(first, last, nodes[a]) - inner_.begin());
      }
    }
  }
}

FomSystem assemble(const BackgroundMesh& mesh, const SurrogateMap& surrogate,
                   const ProblemData& problem, const OperatorPattern& pattern) {
  require(problem.alpha > 0.0, "Nitsche penalty alpha must be positive");
  require(static_cast<int>(surrogate.element_active.size()) == mesh.num_elements() &&
              pattern.size() == mesh.num_nodes(),
          "surrogate map or operator pattern was built for a different mesh");

  const int n = mesh.num_nodes();
  FomSystem sys;
  sys.mu = surrogate.mu;
  sys.F = Vector::Zero(n);

  std::vector<double> values(pattern.nonzeros(), 0.0);
  auto scatter = [&](int e, const Eigen::Matrix3d& k) {
    const auto& slots = pattern.element_slots(e);
    for (int b = 0; b < 3; ++b) {
      for (int a = 0; a < 3; ++a) values[slots[3 * b + a]] += k(a, b);
    }
  };

  for (int e : surrogate.active_elements) {
    const P1Element& el = mesh.element(e);
    scatter(e, pattern.stiffness(e));
    // one-point rule at the centroid
    const double f = problem.source(mesh.centroid(e));
    for (int a = 0; a < 3; ++a) sys.F[el.nodes[a]] += f * el.area / 3.0;
  }

  for (const SurrogateEdge& edge : surrogate.edges) {
    for (const QuadraturePoint& qp : edge.points) {
      if (qp.frame.normal.dot(edge.normal) < 0.0) {
        throw GeometryError("n . n_tilde < 0 on surrogate edge " + std::to_string(edge.edge));
      }
    }
    const P1Element& el = mesh.element(edge.element);
    const EdgeContribution c =
        surrogate_edge_terms(el, mesh.vertices(edge.element), edge, problem);
    scatter(edge.element, c.matrix());
    for (int a = 0; a < 3; ++a) sys.F[el.nodes[a]] += c.load[a];
  }

  sys.constrained.assign(n, 0);
  Vector prescribed = Vector::Zero(n);
  for (int node : surrogate.outer_dirichlet_nodes) {
    sys.constrained[node] = 1;
    prescribed[node] = problem.outer_wall(mesh.node(node));
  }
  for (int node : surrogate.ghost_nodes) {
    sys.constrained[node] = 1;
    prescribed[node] = 0.0;
  }

  // Lift the prescribed values into the load, then decouple constrained DOFs.
  const auto& outer = pattern.outer();
  const auto& inner = pattern.inner();
  const auto& fixed = sys.constrained;
  for (int j = 0; j < n; ++j) {
    if (prescribed[j] == 0.0) continue;
    for (int k = outer[j]; k < outer[j + 1]; ++k) sys.F[inner[k]] -= values[k] * prescribed[j];
  }
  std::vector<int> a_outer(n + 1, 0);
  std::vector<int> a_inner;
  std::vector<double> a_values;
  a_inner.reserve(pattern.nonzeros());
  a_values.reserve(pattern.nonzeros());
  for (int j = 0; j < n; ++j) {
    if (fixed[j]) {
      a_inner.push_back(j);
      a_values.push_back(1.0);
      sys.F[j] = prescribed[j];
    } else {
      for (int k = outer[j]; k < outer[j + 1]; ++k) {
        if (!fixed[inner[k]] && values[k] != 0.0) {
          a_inner.push_back(inner[k]);
          a_values.push_back(values[k]);
        }
      }
    }
    a_outer[j + 1] = static_cast<int>(a_inner.size());
  }
  sys.A = Eigen::Map<const SparseMatrix>(n, n, static_cast<Eigen::Index>(a_values.size()),
                                         a_outer.data(), a_inner.data(), a_values.data());
  return sys;
}

FomSystem assemble(const BackgroundMesh& mesh, const SurrogateMap& surrogate,
                   const ProblemData& problem) {
  return assemble(mesh, surrogate, problem, OperatorPattern(mesh));
}

SymmetryReport free_block_symmetry_check(const FomSystem& system) {
  SymmetryReport report;
  const SparseMatrix transposed = system.A.transpose();
  const SparseMatrix diff = system.A - transposed;
  for (int k = 0; k < system.A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(system.A, k); it; ++it) {
      if (system.constrained[it.row()] || system.constrained[it.col()]) continue;
      report.max_entry = std::max(report.max_entry, std::abs(it.value()));
    }
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      if (system.constrained[it.row()] || system.constrained[it.col()]) continue;
      report.max_asymmetry = std::max(report.max_asymmetry, std::abs(it.value()));
    }
  }
  return report;
}

}  // namespace sbmrom
