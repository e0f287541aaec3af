#include "pgspi/geometry.hpp"

#include <algorithm>

namespace pgspi::geom {

std::string to_string(const Point& p) {
  return "(" + pgspi::to_string(p.x) + ", " + pgspi::to_string(p.y) + ")";
}

PayoffVector to_payoff(const Point& p) { return PayoffVector{p.x, p.y}; }

Point to_point(const PayoffVector& v) {
  if (v.size() != 2) {
    throw DomainError("polygon-mode geometry needs 2-dimensional payoffs, got " +
                      std::to_string(v.size()));
  }
  return Point{v[0], v[1]};
}

Rational orient(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

namespace {

bool on_segment(const Point& p, const Point& a, const Point& b) {
  if (orient(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

Point lerp(const Point& a, const Point& b, const Rational& t) {
  return Point{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

HalfPlane negate(const HalfPlane& h) { return HalfPlane{-h.a, -h.b, -h.c}; }

}  // namespace

Polygon Polygon::hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Polygon out;
  if (pts.size() <= 1) {
    out.vertices_ = std::move(pts);
    return out;
  }
  bool collinear = true;
  for (std::size_t i = 2; i < pts.size() && collinear; ++i) {
    if (orient(pts[0], pts[1], pts[i]) != 0) collinear = false;
  }
  if (collinear) {
    out.vertices_ = {pts.front(), pts.back()};
    return out;
  }
  std::vector<Point> h;
  h.reserve(2 * pts.size());
  for (const auto& p : pts) {
    while (h.size() >= 2 && orient(h[h.size() - 2], h.back(), p) <= 0) h.pop_back();
    h.push_back(p);
  }
  const std::size_t lower = h.size() + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (h.size() >= lower && orient(h[h.size() - 2], h.back(), *it) <= 0) {
      h.pop_back();
    }
    h.push_back(*it);
  }
  h.pop_back();
  out.vertices_ = std::move(h);
  return out;
}

bool Polygon::contains(const Point& p) const {
  const auto& v = vertices_;
  switch (v.size()) {
    case 0:
      return false;
    case 1:
      return v[0] == p;
    case 2:
      return on_segment(p, v[0], v[1]);
    default:
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (orient(v[i], v[(i + 1) % v.size()], p) < 0) return false;
      }
      return true;
  }
}

std::vector<HalfPlane> Polygon::halfplanes() const {
  const auto& v = vertices_;
  std::vector<HalfPlane> hs;
  if (v.empty()) {
    // 0 <= -1 is never satisfied.
    hs.push_back(HalfPlane{0, 0, -1});
    return hs;
  }
  if (v.size() == 1) {
    hs.push_back(HalfPlane{1, 0, v[0].x});
    hs.push_back(HalfPlane{-1, 0, -v[0].x});
    hs.push_back(HalfPlane{0, 1, v[0].y});
    hs.push_back(HalfPlane{0, -1, -v[0].y});
    return hs;
  }
  auto edge_plane = [](const Point& s, const Point& e) {
    Rational dx = e.x - s.x;
    Rational dy = e.y - s.y;
    // Left of s->e: dx*(py - sy) - dy*(px - sx) >= 0.
    return HalfPlane{dy, -dx, dy * s.x - dx * s.y};
  };
  if (v.size() == 2) {
    HalfPlane line = edge_plane(v[0], v[1]);
    hs.push_back(line);
    hs.push_back(negate(line));
    Rational dx = v[1].x - v[0].x;
    Rational dy = v[1].y - v[0].y;
    hs.push_back(HalfPlane{-dx, -dy, -(dx * v[0].x + dy * v[0].y)});
    hs.push_back(HalfPlane{dx, dy, dx * v[1].x + dy * v[1].y});
    return hs;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    hs.push_back(edge_plane(v[i], v[(i + 1) % v.size()]));
  }
  return hs;
}

std::vector<std::pair<Point, Point>> Polygon::edges() const {
  std::vector<std::pair<Point, Point>> es;
  const auto& v = vertices_;
  if (v.size() == 2) {
    es.emplace_back(v[0], v[1]);
  } else if (v.size() >= 3) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      es.emplace_back(v[i], v[(i + 1) % v.size()]);
    }
  }
  return es;
}

std::string to_string(const Polygon& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.vertices().size(); ++i) {
    if (i) out += ", ";
    out += to_string(p.vertices()[i]);
  }
  return out + "]";
}

Polygon clip(const Polygon& poly, const HalfPlane& h) {
  std::vector<Point> keep;
  for (const auto& v : poly.vertices()) {
    if (h.contains(v)) keep.push_back(v);
  }
  if (keep.size() == poly.vertices().size()) return poly;
  for (const auto& [s, e] : poly.edges()) {
    Rational fs = h.eval(s);
    Rational fe = h.eval(e);
    if ((fs < 0 && fe > 0) || (fs > 0 && fe < 0)) {
      keep.push_back(lerp(s, e, fs / (fs - fe)));
    }
  }
  return Polygon::hull(std::move(keep));
}

Polygon intersect(const Polygon& a, const Polygon& b) {
  if (a.empty() || b.empty()) return {};
  Polygon out = a;
  for (const auto& h : b.halfplanes()) {
    out = clip(out, h);
    if (out.empty()) break;
  }
  return out;
}

std::vector<Point> segment_intersections(const Point& a, const Point& b,
                                         const Point& c, const Point& d) {
  std::vector<Point> out;
  Rational d1x = b.x - a.x, d1y = b.y - a.y;
  Rational d2x = d.x - c.x, d2y = d.y - c.y;
  Rational denom = d1x * d2y - d1y * d2x;
  if (denom != 0) {
    Rational ex = c.x - a.x, ey = c.y - a.y;
    Rational t = (ex * d2y - ey * d2x) / denom;
    Rational u = (ex * d1y - ey * d1x) / denom;
    if (t >= 0 && t <= 1 && u >= 0 && u <= 1) out.push_back(lerp(a, b, t));
    return out;
  }
  for (const auto* p : {&a, &b}) {
    if (on_segment(*p, c, d)) out.push_back(*p);
  }
  for (const auto* p : {&c, &d}) {
    if (on_segment(*p, a, b)) out.push_back(*p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------- Region

namespace {

std::vector<Polygon> normalize_parts(std::vector<Polygon> parts) {
  parts.erase(std::remove_if(parts.begin(), parts.end(),
                             [](const Polygon& p) { return p.empty(); }),
              parts.end());
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  std::vector<Polygon> kept;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    bool inside_other = false;
    for (std::size_t j = 0; j < parts.size() && !inside_other; ++j) {
      if (i == j) continue;
      const auto& vs = parts[i].vertices();
      inside_other = std::all_of(vs.begin(), vs.end(), [&](const Point& p) {
        return parts[j].contains(p);
      });
    }
    if (!inside_other) kept.push_back(parts[i]);
  }
  return kept;
}

void require_same_mode(const Region& a, const Region& b, const char* op) {
  if (!a.empty() && !b.empty() && a.mode() != b.mode()) {
    throw DomainError(std::string(op) +
                      ": cannot combine polygon-mode and point-mode regions");
  }
}

}  // namespace

Region Region::from_polygons(std::vector<Polygon> parts) {
  Region r;
  r.mode_ = Mode::Polygons;
  r.parts_ = normalize_parts(std::move(parts));
  return r;
}

Region Region::from_points(std::vector<TaggedPoint> points) {
  Region r;
  r.mode_ = Mode::Points;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  r.points_ = std::move(points);
  return r;
}

std::vector<PayoffVector> Region::vertex_payoffs() const {
  std::vector<PayoffVector> out;
  for (const auto& part : parts_) {
    for (const auto& v : part.vertices()) out.push_back(to_payoff(v));
  }
  for (const auto& p : points_) out.push_back(p.payoff);
  return out;
}

std::string to_string(const Region& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& part : r.parts()) {
    if (!first) out += ", ";
    first = false;
    out += to_string(part);
  }
  for (const auto& p : r.points()) {
    if (!first) out += ", ";
    first = false;
    out += pgspi::to_string(p.payoff);
  }
  return out + "}";
}

Region intersect(const Region& a, const Region& b) {
  require_same_mode(a, b, "intersect");
  if (a.empty() || b.empty()) return {};
  if (a.mode() == Region::Mode::Points) {
    std::vector<TaggedPoint> out;
    std::set_intersection(a.points().begin(), a.points().end(),
                          b.points().begin(), b.points().end(),
                          std::back_inserter(out));
    return Region::from_points(std::move(out));
  }
  std::vector<Polygon> out;
  for (const auto& pa : a.parts()) {
    for (const auto& pb : b.parts()) {
      Polygon c = intersect(pa, pb);
      if (!c.empty()) out.push_back(std::move(c));
    }
  }
  return Region::from_polygons(std::move(out));
}

Region unite(const Region& a, const Region& b) {
  require_same_mode(a, b, "union");
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.mode() == Region::Mode::Points) {
    auto pts = a.points();
    pts.insert(pts.end(), b.points().begin(), b.points().end());
    return Region::from_points(std::move(pts));
  }
  auto parts = a.parts();
  parts.insert(parts.end(), b.parts().begin(), b.parts().end());
  return Region::from_polygons(std::move(parts));
}

bool contains(const Region& r, const Point& p) {
  if (r.mode() == Region::Mode::Points) return contains(r, to_payoff(p));
  return std::any_of(r.parts().begin(), r.parts().end(),
                     [&](const Polygon& part) { return part.contains(p); });
}

bool contains(const Region& r, const PayoffVector& p) {
  if (r.empty()) return false;
  if (r.mode() == Region::Mode::Points) {
    return std::any_of(r.points().begin(), r.points().end(),
                       [&](const TaggedPoint& t) { return t.payoff == p; });
  }
  if (p.size() != 2) return false;
  return contains(r, to_point(p));
}

namespace {

bool weakly_dominates_strictly_somewhere(const PayoffVector& q,
                                         const PayoffVector& p) {
  bool strict = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] < p[i]) return false;
    if (q[i] > p[i]) strict = true;
  }
  return strict;
}

// part ∩ {q >= p} is a convex set whose vertices are part's vertices inside
// the quadrant, crossings of part's boundary with the two rays from p, or p
// itself. It holds a point other than p iff one of the first two kinds does.
bool polygon_dominates(const Polygon& part, const Point& p) {
  for (const auto& v : part.vertices()) {
    if (v.x >= p.x && v.y >= p.y && v != p) return true;
  }
  const auto& vs = part.vertices();
  const std::size_t n = vs.size() == 2 ? 1 : vs.size() < 2 ? 0 : vs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& s = vs[i];
    const Point& e = vs[(i + 1) % vs.size()];
    if (s.y != e.y && std::min(s.y, e.y) <= p.y && p.y <= std::max(s.y, e.y)) {
      Rational x = s.x + (p.y - s.y) * (e.x - s.x) / (e.y - s.y);
      if (x > p.x) return true;
    }
    if (s.x != e.x && std::min(s.x, e.x) <= p.x && p.x <= std::max(s.x, e.x)) {
      Rational y = s.y + (p.x - s.x) * (e.y - s.y) / (e.x - s.x);
      if (y > p.y) return true;
    }
  }
  return false;
}

}  // namespace

bool dominated_in(const Region& r, const PayoffVector& p) {
  if (r.mode() == Region::Mode::Points) {
    return std::any_of(r.points().begin(), r.points().end(),
                       [&](const TaggedPoint& t) {
                         return weakly_dominates_strictly_somewhere(t.payoff, p);
                       });
  }
  Point pt = to_point(p);
  return std::any_of(r.parts().begin(), r.parts().end(),
                     [&](const Polygon& part) { return polygon_dominates(part, pt); });
}

namespace {

// Merges collinear segments that overlap or touch into maximal segments and
// drops points already covered.
std::vector<Polygon> merge_pieces(std::vector<Polygon> segs, std::vector<Point> pts) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < segs.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < segs.size() && !changed; ++j) {
        const auto& a = segs[i].vertices();
        const auto& b = segs[j].vertices();
        if (orient(a[0], a[1], b[0]) != 0 || orient(a[0], a[1], b[1]) != 0) continue;
        if (on_segment(b[0], a[0], a[1]) || on_segment(b[1], a[0], a[1]) ||
            on_segment(a[0], b[0], b[1])) {
          segs[i] = Polygon::hull({a[0], a[1], b[0], b[1]});
          segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
    }
  }
  std::vector<Polygon> out = segs;
  for (const auto& p : pts) {
    bool covered = std::any_of(segs.begin(), segs.end(),
                               [&](const Polygon& s) { return s.contains(p); });
    if (!covered) out.push_back(Polygon::point(p));
  }
  return out;
}

}  // namespace

Region frontier(const Region& r) {
  if (r.empty()) throw DomainError("frontier of an empty region");
  if (r.mode() == Region::Mode::Points) {
    std::vector<TaggedPoint> keep;
    for (const auto& p : r.points()) {
      if (!dominated_in(r, p.payoff)) keep.push_back(p);
    }
    return Region::from_points(std::move(keep));
  }

  // Dominance status can only change along an edge where the edge crosses a
  // supporting line of some part or an axis-parallel line through a vertex.
  std::vector<HalfPlane> lines;
  for (const auto& part : r.parts()) {
    for (const auto& h : part.halfplanes()) lines.push_back(h);
    for (const auto& v : part.vertices()) {
      lines.push_back(HalfPlane{1, 0, v.x});
      lines.push_back(HalfPlane{0, 1, v.y});
    }
  }

  auto undominated = [&](const Point& p) { return !dominated_in(r, to_payoff(p)); };

  std::vector<Polygon> segs;
  std::vector<Point> pts;
  for (const auto& part : r.parts()) {
    if (part.is_point()) {
      if (undominated(part.vertices()[0])) pts.push_back(part.vertices()[0]);
      continue;
    }
    for (const auto& [s, e] : part.edges()) {
      std::vector<Rational> ts{Rational(0), Rational(1)};
      for (const auto& h : lines) {
        Rational fs = h.eval(s);
        Rational fe = h.eval(e);
        if (fs == fe) continue;
        Rational t = fs / (fs - fe);
        if (t > 0 && t < 1) ts.push_back(t);
      }
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      for (std::size_t k = 0; k < ts.size(); ++k) {
        Point here = lerp(s, e, ts[k]);
        if (undominated(here)) pts.push_back(here);
        if (k + 1 < ts.size()) {
          Point mid = lerp(s, e, (ts[k] + ts[k + 1]) / 2);
          if (undominated(mid)) {
            segs.push_back(Polygon::segment(here, lerp(s, e, ts[k + 1])));
          }
        }
      }
    }
  }
  return Region::from_polygons(merge_pieces(std::move(segs), std::move(pts)));
}

namespace {

// Splits p along every line so that no line crosses the relative interior of
// a resulting cell.
std::vector<Polygon> arrangement_cells(const Polygon& p,
                                       const std::vector<HalfPlane>& lines) {
  std::vector<Polygon> cells{p};
  for (const auto& h : lines) {
    std::vector<Polygon> next;
    for (const auto& cell : cells) {
      bool neg = false, pos = false;
      for (const auto& v : cell.vertices()) {
        Rational f = h.eval(v);
        if (f < 0) neg = true;
        if (f > 0) pos = true;
      }
      if (neg && pos) {
        next.push_back(clip(cell, h));
        next.push_back(clip(cell, negate(h)));
      } else {
        next.push_back(cell);
      }
    }
    cells = std::move(next);
  }
  return cells;
}

std::vector<Point> cell_witnesses(const Polygon& cell) {
  std::vector<Point> w = cell.vertices();
  for (const auto& [s, e] : cell.edges()) w.push_back(lerp(s, e, Rational(1, 2)));
  if (cell.vertices().size() >= 3) {
    Rational sx = 0, sy = 0;
    for (const auto& v : cell.vertices()) {
      sx += v.x;
      sy += v.y;
    }
    Rational n(static_cast<long>(cell.vertices().size()));
    w.push_back(Point{sx / n, sy / n});
  }
  return w;
}

}  // namespace

bool covers(const Region& r, const Polygon& p) {
  if (p.empty()) return true;
  if (r.empty()) return false;
  if (r.mode() != Region::Mode::Polygons) {
    throw DomainError("covers: polygon containment needs a polygon-mode region");
  }
  std::vector<HalfPlane> lines;
  for (const auto& part : r.parts()) {
    for (const auto& h : part.halfplanes()) lines.push_back(h);
  }
  for (const auto& cell : arrangement_cells(p, lines)) {
    for (const auto& w : cell_witnesses(cell)) {
      if (!contains(r, w)) return false;
    }
  }
  return true;
}

bool covers(const Region& outer, const Region& inner) {
  if (inner.empty()) return true;
  if (outer.empty()) return false;
  require_same_mode(outer, inner, "covers");
  if (inner.mode() == Region::Mode::Points) {
    return std::all_of(inner.points().begin(), inner.points().end(),
                       [&](const TaggedPoint& t) {
                         return std::binary_search(outer.points().begin(),
                                                   outer.points().end(), t);
                       });
  }
  return std::all_of(inner.parts().begin(), inner.parts().end(),
                     [&](const Polygon& part) { return covers(outer, part); });
}

bool same_set(const Region& a, const Region& b) {
  return covers(a, b) && covers(b, a);
}

}  // namespace pgspi::geom
