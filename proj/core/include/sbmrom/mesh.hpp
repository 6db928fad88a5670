#pragma once

#include <sbmrom/common.hpp>

#include <array>
#include <vector>

namespace sbmrom {

/// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Box {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(const Point& p, double tol = 0.0) const {
    return p.x() >= xmin - tol && p.x() <= xmax + tol && p.y() >= ymin - tol &&
           p.y() <= ymax + tol;
  }
};

struct Edge {
  std::array<int, 2> nodes{};
  /// Owner elements; owners[1] == -1 on the outer boundary.
  std::array<int, 2> owners{-1, -1};

  bool on_boundary() const { return owners[1] < 0; }
};

/// Linear triangle with precomputed constant basis gradients.
struct P1Element {
  std::array<int, 3> nodes{};
  /// Row a holds the gradient of the barycentric basis function of node a.
  Eigen::Matrix<double, 3, 2> gradients;
  double area = 0.0;

  static P1Element from_vertices(const std::array<int, 3>& nodes,
                                 const std::array<Point, 3>& vertices);

  /// Barycentric coordinates of p with respect to this element's vertices.
  Eigen::Vector3d barycentric(const std::array<Point, 3>& vertices,
                              const Point& p) const;
};

/// Fixed structured triangulation of a rectangular box.
///
/// Cells are numbered row-major from the bottom-left corner and every cell is
/// split along its bottom-left to top-right diagonal into a lower-right and an
/// upper-left triangle (in that order). The mesh never changes with the
/// geometric parameter.
class BackgroundMesh {
 public:
  BackgroundMesh(Box box, double h);

  const Box& box() const { return box_; }
  double target_h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double dx() const { return box_.width() / nx_; }
  double dy() const { return box_.height() / ny_; }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }

  const std::vector<Point>& nodes() const { return nodes_; }
  const Point& node(int i) const { return nodes_[i]; }
  const std::vector<P1Element>& elements() const { return elements_; }
  const P1Element& element(int e) const { return elements_[e]; }
  std::array<Point, 3> vertices(int e) const;
  Point centroid(int e) const;

  const std::vector<Edge>& edges() const { return edges_; }
  /// Edge indices of element e, ordered (n0,n1), (n1,n2), (n2,n0).
  const std::array<int, 3>& element_edges(int e) const { return element_edges_[e]; }

  const std::vector<int>& outer_boundary_nodes() const { return boundary_nodes_; }
  bool is_outer_boundary_node(int i) const { return is_boundary_node_[i] != 0; }

  int node_index(int i, int j) const { return j * (nx_ + 1) + i; }

 private:
  Box box_;
  double h_;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<Point> nodes_;
  std::vector<P1Element> elements_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> element_edges_;
  std::vector<int> boundary_nodes_;
  std::vector<char> is_boundary_node_;
};

BackgroundMesh build_structured_mesh(const Box& box, double h);

/// K_ij = area * grad(phi_i) . grad(phi_j).
Eigen::Matrix3d element_stiffness(const P1Element& element);

/// Exact P1 mass matrix (area / 12) * [[2,1,1],[1,2,1],[1,1,2]].
Eigen::Matrix3d element_mass(const P1Element& element);

/// Global mass matrix over the elements flagged in `active`, or over the
/// whole background box when `active` is empty.
SparseMatrix assemble_mass(const BackgroundMesh& mesh, const std::vector<char>& active = {});

/// Global stiffness matrix over the elements flagged in `active`, or over all
/// elements when `active` is empty.
SparseMatrix assemble_stiffness(const BackgroundMesh& mesh,
                                const std::vector<char>& active = {});

}  // namespace sbmrom
