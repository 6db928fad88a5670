#pragma once

#include <sbmrom/geometry.hpp>
#include <sbmrom/mesh.hpp>

#include <array>
#include <vector>

namespace sbmrom {

struct QuadraturePoint {
  Point position;
  double weight = 0.0;
  BoundaryFrame frame;
};

/// Interface edge between an active element and the ghost side.
struct SurrogateEdge {
  int edge = -1;              ///< index into BackgroundMesh::edges()
  std::array<int, 2> nodes{};
  int element = -1;           ///< owning active element
  Point normal;               ///< outward unit normal of the active element
  double length = 0.0;
  double h_perp = 0.0;        ///< element altitude over the edge
  std::vector<QuadraturePoint> points;
};

/// Active/ghost split of the background mesh for one parameter value.
struct SurrogateMap {
  double mu = 0.0;
  std::vector<char> element_active;  ///< per element
  std::vector<int> active_elements;
  std::vector<char> node_ghost;      ///< per node
  std::vector<int> ghost_nodes;
  std::vector<SurrogateEdge> edges;
  std::vector<int> outer_dirichlet_nodes;

  bool is_active(int element) const { return element_active[element] != 0; }
  bool is_ghost(int node) const { return node_ghost[node] != 0; }
};

inline constexpr int kDefaultQuadratureOrder = 3;

/// Gauss-Legendre points on the segment [a, b] (order = number of points,
/// 1..3), each carrying the closest-point frame onto the hole boundary.
std::vector<QuadraturePoint> edge_quadrature(const Point& a, const Point& b,
                                             const Primitive& hole, int order);

/// Altitude of the owner triangle over the given edge: 2 * area / length.
double orthogonal_length(const P1Element& owner, double edge_length);

/// True iff the closed triangle meets the open hole.
bool intersects_hole(const std::array<Point, 3>& triangle, const Primitive& hole);

/// Splits the mesh into active elements (disjoint from the open hole) and the
/// ghost region, and extracts the surrogate boundary with its quadrature data.
///
/// Throws GeometryError when the hole is not resolved by the mesh (no mesh node
/// strictly inside it) or when some quadrature point violates n . n_tilde >= 0.
SurrogateMap classify(const BackgroundMesh& mesh, const EmbeddedShape& shape, double mu,
                      int quadrature_order = kDefaultQuadratureOrder);

}  // namespace sbmrom
