#include <sbmrom/geometry.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <type_traits>

namespace sbmrom {

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::RectangleYCenter:
      return "rectangle_ycenter";
    case ShapeKind::RectangleAspect:
      return "rectangle_aspect";
    case ShapeKind::Disc:
      return "disc";
  }
  return "unknown";
}

ShapeKind shape_kind_from_string(const std::string& name) {
  if (name == "rectangle_ycenter") return ShapeKind::RectangleYCenter;
  if (name == "rectangle_aspect") return ShapeKind::RectangleAspect;
  if (name == "disc") return ShapeKind::Disc;
  throw PreconditionError("unknown shape kind '" + name + "'");
}

EmbeddedShape EmbeddedShape::rectangle_ycenter(ParameterRange range, double half_width,
                                               double half_height, double x_center) {
  require(range.lo <= range.hi, "empty parameter range");
  require(half_width > 0.0 && half_height > 0.0, "rectangle half sizes must be positive");
  return EmbeddedShape(ShapeKind::RectangleYCenter, range, Point(x_center, 0.0), half_width,
                       half_height);
}

EmbeddedShape EmbeddedShape::rectangle_aspect(ParameterRange range, double width,
                                              Point center) {
  require(range.lo <= range.hi, "empty parameter range");
  require(range.lo > 0.0, "aspect ratio range must be positive");
  require(width > 0.0, "rectangle width must be positive");
  return EmbeddedShape(ShapeKind::RectangleAspect, range, center, width, 0.0);
}

EmbeddedShape EmbeddedShape::disc(Point center, double radius) {
  return disc(center, ParameterRange{radius, radius});
}

EmbeddedShape EmbeddedShape::disc(Point center, ParameterRange radius_range) {
  require(radius_range.lo <= radius_range.hi, "empty parameter range");
  require(radius_range.lo > 0.0, "disc radius must be positive");
  return EmbeddedShape(ShapeKind::Disc, radius_range, center, 0.0, 0.0);
}

Primitive EmbeddedShape::at(double mu) const {
  if (!admissible(mu)) {
    throw PreconditionError("parameter " + std::to_string(mu) + " outside admissible range [" +
                            std::to_string(range_.lo) + ", " + std::to_string(range_.hi) + "]");
  }
  switch (kind_) {
    case ShapeKind::RectangleYCenter:
      return RectanglePrimitive{Point(center_.x(), mu), a_, b_};
    case ShapeKind::RectangleAspect:
      return RectanglePrimitive{center_, 0.5 * a_, 0.5 * a_ / mu};
    case ShapeKind::Disc:
      return DiscPrimitive{center_, mu};
  }
  throw Error("unreachable shape kind");
}

Eigen::Vector4d EmbeddedShape::bounds(double mu) const {
  return std::visit(
      [](const auto& p) -> Eigen::Vector4d {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RectanglePrimitive>) {
          return {p.center.x() - p.half_width, p.center.x() + p.half_width,
                  p.center.y() - p.half_height, p.center.y() + p.half_height};
        } else {
          return {p.center.x() - p.radius, p.center.x() + p.radius, p.center.y() - p.radius,
                  p.center.y() + p.radius};
        }
      },
      at(mu));
}

Eigen::Vector4d EmbeddedShape::envelope() const {
  // Every kind is monotone in mu along each bound, so the endpoints suffice.
  const Eigen::Vector4d a = bounds(range_.lo);
  const Eigen::Vector4d b = bounds(range_.hi);
  return {std::min(a[0], b[0]), std::max(a[1], b[1]), std::min(a[2], b[2]),
          std::max(a[3], b[3])};
}

bool is_inside(const Primitive& hole, const Point& p) {
  return std::visit(
      [&](const auto& h) {
        using T = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<T, RectanglePrimitive>) {
          return std::abs(p.x() - h.center.x()) < h.half_width &&
                 std::abs(p.y() - h.center.y()) < h.half_height;
        } else {
          return (p - h.center).squaredNorm() < h.radius * h.radius;
        }
      },
      hole);
}

bool is_inside(const EmbeddedShape& shape, double mu, const Point& p) {
  return is_inside(shape.at(mu), p);
}

namespace {

Point rotate_ccw(const Point& v) { return {-v.y(), v.x()}; }

BoundaryFrame make_frame(const Point& x, const Point& x_tilde, const Point& normal) {
  BoundaryFrame f;
  f.x = x;
  f.d = x - x_tilde;
  f.normal = normal;
  f.tangent = rotate_ccw(normal);
  return f;
}

BoundaryFrame project(const RectanglePrimitive& r, const Point& x_tilde) {
  const Point q = x_tilde - r.center;
  const double a = r.half_width;
  const double b = r.half_height;
  const bool out_x = std::abs(q.x()) > a;
  const bool out_y = std::abs(q.y()) > b;

  if (out_x || out_y) {
    const Point local(std::clamp(q.x(), -a, a), std::clamp(q.y(), -b, b));
    const Point x = r.center + local;
    if (out_x && out_y) {
      const Point d = x - x_tilde;
      return make_frame(x, x_tilde, d / d.norm());
    }
    // Normal of the computational domain points into the hole.
    const Point normal = out_x ? Point(q.x() > 0 ? -1.0 : 1.0, 0.0)
                               : Point(0.0, q.y() > 0 ? -1.0 : 1.0);
    return make_frame(x, x_tilde, normal);
  }

  // On the boundary or inside: nearest face, ties resolved in perimeter order
  // bottom, right, top, left.
  const std::array<double, 4> gap = {q.y() + b, a - q.x(), b - q.y(), q.x() + a};
  const std::array<Point, 4> face_normal = {Point(0, 1), Point(-1, 0), Point(0, -1),
                                            Point(1, 0)};
  int best = 0;
  for (int k = 1; k < 4; ++k) {
    if (gap[k] < gap[best]) best = k;
  }
  Point local = q;
  switch (best) {
    case 0: local.y() = -b; break;
    case 1: local.x() = a; break;
    case 2: local.y() = b; break;
    default: local.x() = -a; break;
  }
  return make_frame(r.center + local, x_tilde, face_normal[best]);
}

BoundaryFrame project(const DiscPrimitive& c, const Point& x_tilde) {
  const Point q = x_tilde - c.center;
  const double rho = q.norm();
  const Point radial = rho > 0.0 ? Point(q / rho) : Point(1.0, 0.0);
  return make_frame(c.center + c.radius * radial, x_tilde, -radial);
}

}  // namespace

BoundaryFrame closest_point(const Primitive& hole, const Point& x_tilde) {
  return std::visit([&](const auto& h) { return project(h, x_tilde); }, hole);
}

BoundaryFrame closest_point(const EmbeddedShape& shape, double mu, const Point& x_tilde) {
  return closest_point(shape.at(mu), x_tilde);
}

ScalarField ScalarField::constant(double c) {
  return {[c](const Point&) { return c; }, [](const Point&) { return Point(0.0, 0.0); }};
}

ScalarField ScalarField::affine(double c, double gx, double gy) {
  return {[=](const Point& p) { return c + gx * p.x() + gy * p.y(); },
          [=](const Point&) { return Point(gx, gy); }};
}

DirichletSample dirichlet_data(const ScalarField& g, const BoundaryFrame& frame) {
  DirichletSample s;
  s.value = g.value(frame.x);
  s.tangential_derivative = g.gradient ? g.gradient(frame.x).dot(frame.tangent) : 0.0;
  return s;
}

}  // namespace sbmrom
