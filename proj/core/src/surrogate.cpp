#include <sbmrom/surrogate.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

namespace sbmrom {

namespace {

struct GaussRule {
  std::array<double, 3> nodes;  // on [-1, 1]
  std::array<double, 3> weights;
  int size;
};

GaussRule gauss_rule(int order) {
  switch (order) {
    case 1:
      return {{0.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, 1};
    case 2: {
      const double x = 1.0 / std::sqrt(3.0);
      return {{-x, x, 0.0}, {1.0, 1.0, 0.0}, 2};
    }
    case 3: {
      const double x = std::sqrt(3.0 / 5.0);
      return {{-x, 0.0, x}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}, 3};
    }
    default:
      throw PreconditionError("edge quadrature order must be 1, 2 or 3");
  }
}

double point_segment_distance2(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - p).squaredNorm();
}

bool point_in_triangle(const Point& p, const std::array<Point, 3>& t) {
  auto cross = [](const Point& u, const Point& v) { return u.x() * v.y() - u.y() * v.x(); };
  const double s0 = cross(t[1] - t[0], p - t[0]);
  const double s1 = cross(t[2] - t[1], p - t[1]);
  const double s2 = cross(t[0] - t[2], p - t[2]);
  return (s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0);
}

// Separating-axis test between a closed triangle and an open rectangle: the
// interiors are disjoint iff some candidate axis separates the projections,
// touching allowed.
bool triangle_meets_open_rectangle(const std::array<Point, 3>& t, const RectanglePrimitive& r) {
  std::array<Point, 5> axes = {Point(1, 0), Point(0, 1), Point(0, 0), Point(0, 0), Point(0, 0)};
  for (int k = 0; k < 3; ++k) {
    const Point e = t[(k + 1) % 3] - t[k];
    axes[2 + k] = Point(-e.y(), e.x());
  }
  const std::array<Point, 4> corners = {
      r.center + Point(-r.half_width, -r.half_height),
      r.center + Point(r.half_width, -r.half_height),
      r.center + Point(r.half_width, r.half_height),
      r.center + Point(-r.half_width, r.half_height)};
  for (const Point& axis : axes) {
    double tmin = INFINITY, tmax = -INFINITY, rmin = INFINITY, rmax = -INFINITY;
    for (const Point& p : t) {
      const double s = axis.dot(p);
      tmin = std::min(tmin, s);
      tmax = std::max(tmax, s);
    }
    for (const Point& p : corners) {
      const double s = axis.dot(p);
      rmin = std::min(rmin, s);
      rmax = std::max(rmax, s);
    }
    if (tmax <= rmin || rmax <= tmin) return false;
  }
  return true;
}

bool triangle_meets_open_disc(const std::array<Point, 3>& t, const DiscPrimitive& c) {
  if (point_in_triangle(c.center, t)) return true;
  double d2 = INFINITY;
  for (int k = 0; k < 3; ++k) {
    d2 = std::min(d2, point_segment_distance2(c.center, t[k], t[(k + 1) % 3]));
  }
  return d2 < c.radius * c.radius;
}

}  // namespace

std::vector<QuadraturePoint> edge_quadrature(const Point& a, const Point& b,
                                             const Primitive& hole, int order) {
  const GaussRule rule = gauss_rule(order);
  const double half_length = 0.5 * (b - a).norm();
  std::vector<QuadraturePoint> points;
  points.reserve(rule.size);
  for (int q = 0; q < rule.size; ++q) {
    QuadraturePoint qp;
    qp.position = 0.5 * (a + b) + 0.5 * rule.nodes[q] * (b - a);
    qp.weight = rule.weights[q] * half_length;
    qp.frame = closest_point(hole, qp.position);
    points.push_back(qp);
  }
  return points;
}

double orthogonal_length(const P1Element& owner, double edge_length) {
  return 2.0 * owner.area / edge_length;
}

bool intersects_hole(const std::array<Point, 3>& triangle, const Primitive& hole) {
  return std::visit(
      [&](const auto& h) {
        using T = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<T, RectanglePrimitive>) {
          return triangle_meets_open_rectangle(triangle, h);
        } else {
          return triangle_meets_open_disc(triangle, h);
        }
      },
      hole);
}

SurrogateMap classify(const BackgroundMesh& mesh, const EmbeddedShape& shape, double mu,
                      int quadrature_order) {
  const Primitive hole = shape.at(mu);
  gauss_rule(quadrature_order);  // validates the order up front

  const Eigen::Vector4d bb = shape.bounds(mu);
  const Box& box = mesh.box();
  if (bb[0] < box.xmin + mesh.dx() || bb[1] > box.xmax - mesh.dx() ||
      bb[2] < box.ymin + mesh.dy() || bb[3] > box.ymax - mesh.dy()) {
    throw PreconditionError("embedded shape at mu = " + std::to_string(mu) +
                            " does not keep one element layer of clearance to the box");
  }

  SurrogateMap map;
  map.mu = mu;
  map.element_active.assign(mesh.num_elements(), 0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto v = mesh.vertices(e);
    const bool apart = std::max({v[0].x(), v[1].x(), v[2].x()}) <= bb[0] ||
                       std::min({v[0].x(), v[1].x(), v[2].x()}) >= bb[1] ||
                       std::max({v[0].y(), v[1].y(), v[2].y()}) <= bb[2] ||
                       std::min({v[0].y(), v[1].y(), v[2].y()}) >= bb[3];
    if (apart || !intersects_hole(v, hole)) {
      map.element_active[e] = 1;
      map.active_elements.push_back(e);
    }
  }
  if (map.active_elements.empty()) {
    throw GeometryError("no active elements for mu = " + std::to_string(mu));
  }

  std::vector<char> touched(mesh.num_nodes(), 0);
  for (int e : map.active_elements) {
    for (int n : mesh.element(e).nodes) touched[n] = 1;
  }
  map.node_ghost.assign(mesh.num_nodes(), 0);
  bool resolved = false;
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    if (!touched[n]) {
      map.node_ghost[n] = 1;
      map.ghost_nodes.push_back(n);
    }
    if (is_inside(hole, mesh.node(n))) resolved = true;
  }
  if (!resolved) {
    throw GeometryError("unresolved geometry: no mesh node lies inside the hole at mu = " +
                        std::to_string(mu) + "; refine the background mesh");
  }

  const auto& edges = mesh.edges();
  for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
    const Edge& edge = edges[k];
    if (edge.on_boundary()) continue;
    const bool a0 = map.is_active(edge.owners[0]);
    const bool a1 = map.is_active(edge.owners[1]);
    if (a0 == a1) continue;

    SurrogateEdge se;
    se.edge = k;
    se.nodes = edge.nodes;
    se.element = a0 ? edge.owners[0] : edge.owners[1];
    const Point& p = mesh.node(edge.nodes[0]);
    const Point& q = mesh.node(edge.nodes[1]);
    se.length = (q - p).norm();
    Point normal(-(q - p).y(), (q - p).x());
    normal /= normal.norm();
    if (normal.dot(0.5 * (p + q) - mesh.centroid(se.element)) < 0.0) normal = -normal;
    se.normal = normal;
    se.h_perp = orthogonal_length(mesh.element(se.element), se.length);
    se.points = edge_quadrature(p, q, hole, quadrature_order);

    for (const QuadraturePoint& qp : se.points) {
      const double alignment = qp.frame.normal.dot(se.normal);
      if (alignment < 0.0) {
        std::ostringstream msg;
        msg << "minimal resolution assumption n . n_tilde >= 0 violated on surrogate edge "
            << k << " (nodes " << se.nodes[0] << ", " << se.nodes[1] << ") at mu = " << mu
            << ": n . n_tilde = " << alignment;
        throw GeometryError(msg.str());
      }
    }
    map.edges.push_back(std::move(se));
  }

  map.outer_dirichlet_nodes = mesh.outer_boundary_nodes();
  return map;
}

}  // namespace sbmrom
