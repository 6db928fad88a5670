#pragma once

#include <sbmrom/common.hpp>

#include <functional>
#include <string>
#include <variant>

namespace sbmrom {

/// Closed admissible interval for the scalar geometric parameter.
struct ParameterRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double mu) const { return mu >= lo && mu <= hi; }
  double width() const { return hi - lo; }
};

struct RectanglePrimitive {
  Point center{0.0, 0.0};
  double half_width = 0.0;   // along x
  double half_height = 0.0;  // along y
};

struct DiscPrimitive {
  Point center{0.0, 0.0};
  double radius = 0.0;
};

/// The hole for one parameter value.
using Primitive = std::variant<RectanglePrimitive, DiscPrimitive>;

enum class ShapeKind { RectangleYCenter, RectangleAspect, Disc };

std::string to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(const std::string& name);

/// Parametrized embedded hole. The computational domain is the background box
/// minus the open hole.
///
/// - RectangleYCenter: fixed size 2a x 2b, center (x0, mu).
/// - RectangleAspect: width k1 fixed, height k2 = k1 / mu (so mu = k1 / k2 and
///   mu * k2 = k1), center fixed.
/// - Disc: center fixed, radius = mu.
class EmbeddedShape {
 public:
  static EmbeddedShape rectangle_ycenter(ParameterRange range = {-0.5, 0.5},
                                         double half_width = 0.4, double half_height = 0.35,
                                         double x_center = 0.0);
  static EmbeddedShape rectangle_aspect(ParameterRange range = {0.29, 6.67},
                                        double width = 0.2, Point center = {0.0, 0.0});
  static EmbeddedShape disc(Point center, double radius);
  static EmbeddedShape disc(Point center, ParameterRange radius_range);

  ShapeKind kind() const { return kind_; }
  const ParameterRange& range() const { return range_; }
  bool admissible(double mu) const { return range_.contains(mu); }

  /// Resolves the hole at mu; throws PreconditionError when mu is not admissible.
  Primitive at(double mu) const;

  /// Axis-aligned bounding box of the hole at mu: {xmin, xmax, ymin, ymax}.
  Eigen::Vector4d bounds(double mu) const;

  /// Bounding box over the whole parameter range.
  Eigen::Vector4d envelope() const;

 private:
  EmbeddedShape(ShapeKind kind, ParameterRange range, Point center, double a, double b)
      : kind_(kind), range_(range), center_(center), a_(a), b_(b) {}

  ShapeKind kind_;
  ParameterRange range_;
  Point center_;
  double a_;  // RectangleYCenter: half width; RectangleAspect: width k1
  double b_;  // RectangleYCenter: half height
};

/// Closest-point data for a surrogate point x_tilde.
struct BoundaryFrame {
  Point x;        ///< projection onto the true boundary
  Point d;        ///< distance vector x - x_tilde
  Point normal;   ///< unit normal, outward from the computational domain (into the hole)
  Point tangent;  ///< normal rotated by +90 degrees

  double distance() const { return d.norm(); }
};

/// True iff p lies strictly inside the hole; boundary points are outside.
bool is_inside(const Primitive& hole, const Point& p);
bool is_inside(const EmbeddedShape& shape, double mu, const Point& p);

/// Nearest point on the hole boundary. For projections onto a rectangle corner
/// the normal is d / |d|; with |d| = 0 the face normal is returned. Ties are
/// broken by the perimeter coordinate, counterclockwise from the bottom-left
/// corner (rectangles) or from angle 0 (discs).
BoundaryFrame closest_point(const Primitive& hole, const Point& x_tilde);
BoundaryFrame closest_point(const EmbeddedShape& shape, double mu, const Point& x_tilde);

/// Scalar field with analytic gradient (Dirichlet data, sources, exact solutions).
struct ScalarField {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;

  double operator()(const Point& p) const { return value(p); }

  static ScalarField constant(double c);
  /// c + gx * x + gy * y
  static ScalarField affine(double c, double gx, double gy);
};

/// Dirichlet value at the projection point and its tangential derivative.
struct DirichletSample {
  double value = 0.0;
  double tangential_derivative = 0.0;
};

DirichletSample dirichlet_data(const ScalarField& g, const BoundaryFrame& frame);

}  // namespace sbmrom
