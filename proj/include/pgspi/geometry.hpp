#pragma once

// Exact rational region arithmetic in payoff space.
//
// Two representations share the Region type:
//  * polygon mode: a finite union of closed convex polygons in the plane.
//    Degenerate polygons (segments, points) are first-class.
//  * point mode: a finite set of payoff vectors of any dimension, each tagged
//    with an outcome that realizes it.
// Everything is exact; there is no floating point in this module.

#include <optional>
#include <vector>

#include "pgspi/types.hpp"

namespace pgspi::geom {

struct Point {
  Rational x;
  Rational y;

  friend bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  friend bool operator<(const Point& a, const Point& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

std::string to_string(const Point& p);
PayoffVector to_payoff(const Point& p);
Point to_point(const PayoffVector& v);

/// Cross product of (b - a) and (c - a).
Rational orient(const Point& a, const Point& b, const Point& c);

/// The closed half-plane a*x + b*y <= c.
struct HalfPlane {
  Rational a;
  Rational b;
  Rational c;

  Rational eval(const Point& p) const { return a * p.x + b * p.y - c; }
  bool contains(const Point& p) const { return eval(p) <= 0; }
};

/// Closed convex polygon with canonical vertex order: counterclockwise,
/// no repeated or collinear vertices, lexicographically smallest vertex
/// first. One vertex is a point and two vertices a segment.
class Polygon {
 public:
  Polygon() = default;

  /// Convex hull of an arbitrary point list (empty list gives empty polygon).
  static Polygon hull(std::vector<Point> points);
  static Polygon point(Point p) { return hull({std::move(p)}); }
  static Polygon segment(Point a, Point b) {
    return hull({std::move(a), std::move(b)});
  }

  const std::vector<Point>& vertices() const { return vertices_; }
  bool empty() const { return vertices_.empty(); }
  bool is_point() const { return vertices_.size() == 1; }
  bool is_segment() const { return vertices_.size() == 2; }

  /// Boundary-inclusive membership.
  bool contains(const Point& p) const;

  /// H-representation; for degenerate polygons the lines are doubled and
  /// capped so the intersection of the half-planes is exactly the polygon.
  std::vector<HalfPlane> halfplanes() const;

  /// Edges as (start, end) pairs: n edges for n >= 3, one for a segment,
  /// none for a point.
  std::vector<std::pair<Point, Point>> edges() const;

  friend bool operator==(const Polygon& a, const Polygon& b) {
    return a.vertices_ == b.vertices_;
  }
  friend bool operator<(const Polygon& a, const Polygon& b) {
    return std::lexicographical_compare(a.vertices_.begin(), a.vertices_.end(),
                                        b.vertices_.begin(), b.vertices_.end());
  }

 private:
  std::vector<Point> vertices_;
};

std::string to_string(const Polygon& p);

Polygon clip(const Polygon& poly, const HalfPlane& h);
Polygon intersect(const Polygon& a, const Polygon& b);

/// Intersection point of segments [a,b] and [c,d] when they meet in exactly
/// one point, or the overlapping sub-segment endpoints when collinear.
std::vector<Point> segment_intersections(const Point& a, const Point& b,
                                         const Point& c, const Point& d);

/// A payoff vector tagged with an outcome realizing it.
struct TaggedPoint {
  PayoffVector payoff;
  Outcome outcome;

  friend bool operator==(const TaggedPoint& a, const TaggedPoint& b) {
    return a.payoff == b.payoff && a.outcome == b.outcome;
  }
  friend bool operator<(const TaggedPoint& a, const TaggedPoint& b) {
    if (!(a.payoff == b.payoff)) return a.payoff < b.payoff;
    return a.outcome < b.outcome;
  }
};

class Region {
 public:
  enum class Mode { Polygons, Points };

  /// The empty region. It is compatible with both modes.
  Region() = default;

  static Region from_polygons(std::vector<Polygon> parts);
  static Region from_polygon(Polygon part) {
    return from_polygons({std::move(part)});
  }
  static Region from_points(std::vector<TaggedPoint> points);

  Mode mode() const { return mode_; }
  bool empty() const { return parts_.empty() && points_.empty(); }

  const std::vector<Polygon>& parts() const { return parts_; }
  const std::vector<TaggedPoint>& points() const { return points_; }

  /// Every vertex of every part (polygon mode) or every point's payoff.
  std::vector<PayoffVector> vertex_payoffs() const;

  friend bool operator==(const Region& a, const Region& b) {
    if (a.empty() && b.empty()) return true;
    return a.mode_ == b.mode_ && a.parts_ == b.parts_ && a.points_ == b.points_;
  }

 private:
  Mode mode_ = Mode::Polygons;
  std::vector<Polygon> parts_;
  std::vector<TaggedPoint> points_;
};

std::string to_string(const Region& r);

Region intersect(const Region& a, const Region& b);
Region unite(const Region& a, const Region& b);

/// The points of r not weakly dominated (with a strict coordinate) by any
/// point of r. In polygon mode the result is a union of maximal segments and
/// isolated points. Throws DomainError on an empty region.
Region frontier(const Region& r);

bool contains(const Region& r, const PayoffVector& p);
bool contains(const Region& r, const Point& p);

/// True when some point of r weakly dominates p with a strict coordinate.
bool dominated_in(const Region& r, const PayoffVector& p);

/// Set containment of a convex polygon in a (polygon-mode) region, exact.
bool covers(const Region& r, const Polygon& p);

/// Set containment inner ⊆ outer. Points mode compares tagged points.
bool covers(const Region& outer, const Region& inner);

/// Set equality (as point sets, not representation).
bool same_set(const Region& a, const Region& b);

}  // namespace pgspi::geom
