#include <sbmrom/mesh.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace sbmrom {

P1Element P1Element::from_vertices(const std::array<int, 3>& nodes,
                                   const std::array<Point, 3>& v) {
  P1Element el;
  el.nodes = nodes;
  const Point e1 = v[1] - v[0];
  const Point e2 = v[2] - v[0];
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  el.area = 0.5 * det;
  // grad(phi_a) = rot(opposite edge) / (2 area)
  for (int a = 0; a < 3; ++a) {
    const Point& p = v[(a + 1) % 3];
    const Point& q = v[(a + 2) % 3];
    el.gradients(a, 0) = (p.y() - q.y()) / det;
    el.gradients(a, 1) = (q.x() - p.x()) / det;
  }
  return el;
}

Eigen::Vector3d P1Element::barycentric(const std::array<Point, 3>& vertices,
                                       const Point& p) const {
  Eigen::Vector3d lambda;
  // phi_a is affine: phi_a(p) = phi_a(v_a) + grad . (p - v_a) with phi_a(v_a) = 1
  for (int a = 0; a < 3; ++a) {
    lambda[a] = 1.0 + gradients.row(a).dot(p - vertices[a]);
  }
  return lambda;
}

BackgroundMesh::BackgroundMesh(Box box, double h) : box_(box), h_(h) {
  require(std::isfinite(box.width()) && std::isfinite(box.height()) &&
              box.width() > 0.0 && box.height() > 0.0,
          "background box must have positive width and height");
  require(std::isfinite(h) && h > 0.0, "mesh size h must be positive");
  require(h <= box.width() && h <= box.height(),
          "mesh size h must not exceed the box dimensions");

  // Relative slack so that exact ratios such as 1.4 / 0.035 are not bumped up by roundoff.
  auto cells = [](double length, double size) {
    const double ratio = length / size;
    return std::max(1, static_cast<int>(std::ceil(ratio * (1.0 - 1e-12))));
  };
  nx_ = cells(box.width(), h);
  ny_ = cells(box.height(), h);

  // Coordinates as convex combinations so symmetric boxes give mirror-exact nodes.
  nodes_.reserve(static_cast<std::size_t>(nx_ + 1) * (ny_ + 1));
  for (int j = 0; j <= ny_; ++j) {
    const double y = ((ny_ - j) * box.ymin + j * box.ymax) / ny_;
    for (int i = 0; i <= nx_; ++i) {
      const double x = ((nx_ - i) * box.xmin + i * box.xmax) / nx_;
      nodes_.emplace_back(x, y);
    }
  }

  elements_.reserve(2 * static_cast<std::size_t>(nx_) * ny_);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const int n00 = node_index(i, j);
      const int n10 = node_index(i + 1, j);
      const int n11 = node_index(i + 1, j + 1);
      const int n01 = node_index(i, j + 1);
      for (const std::array<int, 3>& tri :
           {std::array<int, 3>{n00, n10, n11}, std::array<int, 3>{n00, n11, n01}}) {
        elements_.push_back(P1Element::from_vertices(
            tri, {nodes_[tri[0]], nodes_[tri[1]], nodes_[tri[2]]}));
      }
    }
  }

  std::unordered_map<long long, int> edge_of;
  edge_of.reserve(3 * elements_.size());
  element_edges_.resize(elements_.size());
  const long long stride = num_nodes();
  for (int e = 0; e < num_elements(); ++e) {
    const auto& tri = elements_[e].nodes;
    for (int k = 0; k < 3; ++k) {
      const int a = std::min(tri[k], tri[(k + 1) % 3]);
      const int b = std::max(tri[k], tri[(k + 1) % 3]);
      const long long key = a * stride + b;
      auto [it, inserted] = edge_of.try_emplace(key, static_cast<int>(edges_.size()));
      if (inserted) {
        Edge edge;
        edge.nodes = {a, b};
        edge.owners = {e, -1};
        edges_.push_back(edge);
      } else {
        edges_[it->second].owners[1] = e;
      }
      element_edges_[e][k] = it->second;
    }
  }

  is_boundary_node_.assign(nodes_.size(), 0);
  for (const Edge& edge : edges_) {
    if (edge.on_boundary()) {
      is_boundary_node_[edge.nodes[0]] = 1;
      is_boundary_node_[edge.nodes[1]] = 1;
    }
  }
  for (int n = 0; n < num_nodes(); ++n) {
    if (is_boundary_node_[n]) boundary_nodes_.push_back(n);
  }
}

std::array<Point, 3> BackgroundMesh::vertices(int e) const {
  const auto& tri = elements_[e].nodes;
  return {nodes_[tri[0]], nodes_[tri[1]], nodes_[tri[2]]};
}

Point BackgroundMesh::centroid(int e) const {
  const auto v = vertices(e);
  return (v[0] + v[1] + v[2]) / 3.0;
}

BackgroundMesh build_structured_mesh(const Box& box, double h) {
  return BackgroundMesh(box, h);
}

Eigen::Matrix3d element_stiffness(const P1Element& element) {
  return element.area * element.gradients * element.gradients.transpose();
}

Eigen::Matrix3d element_mass(const P1Element& element) {
  Eigen::Matrix3d m;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return (element.area / 12.0) * m;
}

namespace {

template <typename LocalMatrix>
SparseMatrix assemble_global(const BackgroundMesh& mesh, const std::vector<char>& active,
                             LocalMatrix&& local) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * mesh.elements().size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (!active.empty() && !active[e]) continue;
    const P1Element& el = mesh.element(e);
    const Eigen::Matrix3d k = local(el);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        triplets.emplace_back(el.nodes[a], el.nodes[b], k(a, b));
      }
    }
  }
  SparseMatrix global(mesh.num_nodes(), mesh.num_nodes());
  global.setFromTriplets(triplets.begin(), triplets.end());
  return global;
}

}  // namespace

SparseMatrix assemble_mass(const BackgroundMesh& mesh, const std::vector<char>& active) {
  return assemble_global(mesh, active, [](const P1Element& el) { return element_mass(el); });
}

SparseMatrix assemble_stiffness(const BackgroundMesh& mesh, const std::vector<char>& active) {
  return assemble_global(mesh, active,
                         [](const P1Element& el) { return element_stiffness(el); });
}

}  // namespace sbmrom
