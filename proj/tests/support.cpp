#include "support.hpp"

#include <map>
#include <memory>

namespace testing {

std::filesystem::path data_dir() { return std::filesystem::path(PGSPI_SOURCE_DIR) / "data"; }
std::filesystem::path golden_dir() {
  return std::filesystem::path(PGSPI_SOURCE_DIR) / "tests" / "golden";
}

pgspi::Game game_2p(const std::vector<std::vector<std::pair<long, long>>>& table) {
  std::vector<std::string> rows, cols;
  for (std::size_t i = 0; i < table.size(); ++i) rows.push_back("A" + std::to_string(i + 1));
  for (std::size_t j = 0; j < table[0].size(); ++j) cols.push_back("B" + std::to_string(j + 1));
  std::vector<pgspi::PayoffVector> payoffs;
  for (const auto& row : table) {
    for (const auto& [a, b] : row) payoffs.push_back({R(a), R(b)});
  }
  return pgspi::Game({rows, cols}, payoffs);
}

pgspi::Game scheduling() {
  std::vector<std::string> slots{"Slot1", "Slot2", "Slot3"};
  std::vector<pgspi::PayoffVector> payoffs{
      {R(3), R(1)}, {R(0), R(0)}, {R(0), R(0)},  //
      {R(0), R(0)}, {R(1), R(3)}, {R(0), R(0)},  //
      {R(0), R(0)}, {R(0), R(0)}, {R(1), R(1)},
  };
  return pgspi::Game({slots, slots}, payoffs);
}

pgspi::Program constant(const std::string& a) {
  return pgspi::Program::base(pgspi::BaseProgram::constant(a));
}

pgspi::Program match(const pgspi::Program& pattern, const std::string& then,
                     const pgspi::Program& otherwise, bool on_default) {
  pgspi::MatchPattern pat;
  pat.fingerprint = pattern.fingerprint();
  if (on_default) pat.on = pgspi::MatchPattern::On::Default;
  return pgspi::Program::base(
      pgspi::BaseProgram::match(pat, then, otherwise.default_program()));
}

std::vector<pgspi::Program> depth1_space(const std::vector<std::string>& actions) {
  std::vector<pgspi::Program> out;
  for (const auto& a : actions) out.push_back(constant(a));
  for (const auto& x : actions) {
    for (const auto& a : actions) {
      for (const auto& b : actions) out.push_back(match(constant(x), a, constant(b)));
    }
  }
  return out;
}

namespace {

const std::vector<std::string> kSlots{"Slot1", "Slot2", "Slot3"};

pgspi::RenegPtr mismatch_to(const pgspi::Game& g, const std::string& name, const std::string& slot) {
  std::vector<std::pair<pgspi::Outcome, pgspi::Outcome>> rules;
  for (const auto& a : kSlots) {
    for (const auto& b : kSlots) {
      if (a != b) {
        rules.emplace_back(pgspi::Outcome::pure(g.joint_index({a, b})),
                           pgspi::Outcome::pure(g.joint_index({slot, slot})));
      }
    }
  }
  return std::make_shared<pgspi::RenegFunction>(name, rules);
}

pgspi::SvrPtr fixed(const std::string& name, Region r) {
  return std::make_shared<pgspi::SVRFunction>(
      name, std::vector<pgspi::SvrRule>{{pgspi::CounterpartPattern{}, std::nullopt,
                                         pgspi::RegionSpec::fixed(std::move(r))}});
}

struct Fuzzer {
  std::mt19937_64 rng;
  // pool programs with their AST depth
  std::vector<std::pair<pgspi::Program, int>> pool;
  std::vector<pgspi::SvrPtr> svrs;
  std::vector<pgspi::RenegPtr> rs;
  std::size_t max_rounds = 0;

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  // A match at depth d may only embed programs of depth below d.
  pgspi::BaseProgram base(int depth) {
    using pgspi::BaseProgram;
    if (depth == 0 || pick(4) == 0) return BaseProgram::constant(kSlots[pick(3)]);
    pgspi::MatchPattern pat;
    pat.on = pick(3) == 0 ? pgspi::MatchPattern::On::Default : pgspi::MatchPattern::On::Program;
    std::vector<const pgspi::Program*> shallow;
    for (const auto& [q, d] : pool) {
      if (d < depth) shallow.push_back(&q);
    }
    if (shallow.empty() || pick(5) == 0) {
      pat.fingerprint = random(depth - 1).fingerprint();
    } else {
      pat.fingerprint = shallow[pick(shallow.size())]->fingerprint();
    }
    return BaseProgram::match(pat, kSlots[pick(3)], base(depth - 1));
  }

  pgspi::Program random(int depth) {
    using pgspi::Program;
    pgspi::BaseProgram def = base(depth);
    switch (pick(4)) {
      case 0:
        return Program::base(def);
      case 1:
        return Program::reneg(def, rs[pick(rs.size())]);
      case 2:
        return Program::csr(def, svrs[pick(svrs.size())]);
      default: {
        std::vector<pgspi::SvrPtr> rounds;
        for (std::size_t k = pick(4) + 1; k > 0; --k) rounds.push_back(svrs[pick(svrs.size())]);
        max_rounds = std::max(max_rounds, rounds.size());
        return Program::icsr(def, rounds);
      }
    }
  }
};

}  // namespace

HaltingStats fuzz_halting(std::uint64_t seed, std::size_t profiles) {
  using namespace pgspi;
  Game g = scheduling();
  Fuzzer f{std::mt19937_64(seed), {}, {}, {}};
  f.rs = {mismatch_to(g, "to_slot3", "Slot3"), mismatch_to(g, "to1", "Slot1")};
  f.svrs = {std::make_shared<SVRFunction>(
                "imp", std::vector<SvrRule>{{CounterpartPattern{}, std::nullopt,
                                             RegionSpec::box({{Bound::at_default()}, {Bound::at_default()}},
                                                             {{}, {}})}}),
            fixed("p1", Region::from_polygon(Polygon::segment(P(1, 1), P(3, 1)))),
            fixed("p2", Region::from_polygon(Polygon::segment(P(1, 1), P(1, 3)))), fixed("none", Region{})};
  // counterpart-conditional rules
  f.svrs.push_back(std::make_shared<SVRFunction>(
      "cond", std::vector<SvrRule>{
                  {CounterpartPattern{CounterpartPattern::Kind::Exact, {f.svrs[0]->fingerprint()}},
                   std::nullopt, RegionSpec::fixed(Region::from_polygon(Polygon::point(P(2, 2))))},
                  {CounterpartPattern{}, std::nullopt,
                   RegionSpec::fixed(Region::from_polygon(Polygon::point(P(1, 1))))}}));
  HaltingStats stats;
  for (int k = 0; k < 200; ++k) {
    int d = static_cast<int>(f.pick(7));
    f.pool.emplace_back(f.random(d), d);
    stats.max_depth = std::max(stats.max_depth, d);
  }
  for (std::size_t k = 0; k < profiles; ++k) {
    Program a = f.pick(2) ? f.pool[f.pick(f.pool.size())].first : f.random(6);
    Program b = f.pick(2) ? f.pool[f.pick(f.pool.size())].first : f.random(6);
    ++stats.profiles;
    try {
      EvalTrace t;
      evaluate(std::vector<Program>{a, b}, g, {}, &t);
      if (t.family != "base" && t.family != "mixed") ++stats.renegotiated;
    } catch (const EvaluationLimit&) {
      ++stats.limits;
    }
  }
  stats.max_rounds = f.max_rounds;
  return stats;
}

Point random_point(std::mt19937_64& rng, long span, long den) {
  std::uniform_int_distribution<long> d(0, span * den);
  return {R(d(rng), den), R(d(rng), den)};
}

Polygon random_polygon(std::mt19937_64& rng, std::size_t max_vertices, long span, long den) {
  std::uniform_int_distribution<std::size_t> count(1, max_vertices);
  std::vector<Point> pts;
  for (std::size_t k = count(rng); k > 0; --k) pts.push_back(random_point(rng, span, den));
  return Polygon::hull(std::move(pts));
}

}  // namespace testing

namespace oracle {

using pgspi::Rational;

namespace {

Rational cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

std::vector<std::pair<Point, Point>> sides(const Polygon& p) {
  std::vector<std::pair<Point, Point>> out;
  const auto& v = p.vertices();
  if (v.size() == 2) out.emplace_back(v[0], v[1]);
  if (v.size() >= 3) {
    for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], v[(i + 1) % v.size()]);
  }
  return out;
}

bool between(const Point& a, const Point& b, const Point& q) {
  if (cross(a, b, q) != 0) return false;
  return std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= q.y && q.y <= std::max(a.y, b.y);
}

// Ray segments are long enough to leave every region used in tests.
const Rational kFar = 1000;

}  // namespace

bool in_convex(const Polygon& p, const Point& q) {
  const auto& v = p.vertices();
  if (v.empty()) return false;
  if (v.size() == 1) return v[0] == q;
  if (v.size() == 2) return between(v[0], v[1], q);
  // q is inside iff the fan of triangles from q has the polygon's area.
  Rational area = 0, fan = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    area += cross(v[0], a, b);
    fan += abs(cross(q, a, b));
  }
  return fan == abs(area);
}

std::vector<Point> crossings(const Point& a, const Point& b, const Point& c, const Point& d) {
  std::vector<Point> out;
  // a + t (b - a) = c + s (d - c), solved by Cramer's rule.
  Rational a11 = b.x - a.x, a12 = c.x - d.x, a21 = b.y - a.y, a22 = c.y - d.y;
  Rational r1 = c.x - a.x, r2 = c.y - a.y;
  Rational det = a11 * a22 - a12 * a21;
  if (det != 0) {
    Rational t = (r1 * a22 - a12 * r2) / det;
    Rational s = (a11 * r2 - r1 * a21) / det;
    if (t >= 0 && t <= 1 && s >= 0 && s <= 1) out.push_back({a.x + t * a11, a.y + t * a21});
    return out;
  }
  if (between(c, d, a)) out.push_back(a);
  if (between(c, d, b)) out.push_back(b);
  if (between(a, b, c)) out.push_back(c);
  if (between(a, b, d)) out.push_back(d);
  return out;
}

Polygon intersect(const Polygon& a, const Polygon& b) {
  std::vector<Point> pts;
  for (const auto& v : a.vertices()) {
    if (in_convex(b, v)) pts.push_back(v);
  }
  for (const auto& v : b.vertices()) {
    if (in_convex(a, v)) pts.push_back(v);
  }
  for (const auto& [p, q] : sides(a)) {
    for (const auto& [r, s] : sides(b)) {
      for (const auto& x : crossings(p, q, r, s)) pts.push_back(x);
    }
  }
  return Polygon::hull(std::move(pts));
}

Region intersect(const Region& a, const Region& b) {
  std::vector<Polygon> parts;
  for (const auto& x : a.parts()) {
    for (const auto& y : b.parts()) {
      Polygon c = oracle::intersect(x, y);
      if (!c.empty()) parts.push_back(c);
    }
  }
  if (parts.empty()) return {};
  return Region::from_polygons(std::move(parts));
}

bool dominated(const Region& r, const Point& p) {
  if (r.mode() == Region::Mode::Points) {
    for (const auto& t : r.points()) {
      if (t.payoff[0] >= p.x && t.payoff[1] >= p.y && (t.payoff[0] > p.x || t.payoff[1] > p.y)) {
        return true;
      }
    }
    return false;
  }
  const Point right{p.x + kFar, p.y};
  const Point up{p.x, p.y + kFar};
  for (const auto& part : r.parts()) {
    std::vector<Point> cands;
    for (const auto& v : part.vertices()) {
      if (v.x >= p.x && v.y >= p.y) cands.push_back(v);
    }
    for (const auto& [a, b] : sides(part)) {
      for (const auto& x : crossings(a, b, p, right)) cands.push_back(x);
      for (const auto& x : crossings(a, b, p, up)) cands.push_back(x);
    }
    for (const auto& c : cands) {
      if (c != p) return true;
    }
  }
  return false;
}

Region frontier(const Region& r) {
  if (r.mode() == Region::Mode::Points) {
    std::vector<pgspi::geom::TaggedPoint> keep;
    for (const auto& t : r.points()) {
      if (!dominated(r, {t.payoff[0], t.payoff[1]})) keep.push_back(t);
    }
    return Region::from_points(keep);
  }
  std::vector<Point> cands;
  std::vector<std::pair<Point, Point>> all_sides;
  for (const auto& part : r.parts()) {
    for (const auto& v : part.vertices()) cands.push_back(v);
    for (const auto& s : sides(part)) all_sides.push_back(s);
  }
  std::vector<Point> verts = cands;
  for (std::size_t i = 0; i < all_sides.size(); ++i) {
    const auto& [a, b] = all_sides[i];
    for (std::size_t j = i + 1; j < all_sides.size(); ++j) {
      for (const auto& x : crossings(a, b, all_sides[j].first, all_sides[j].second)) {
        cands.push_back(x);
      }
    }
    for (const auto& v : verts) {
      for (const auto& x : crossings(a, b, {v.x - kFar, v.y}, {v.x + kFar, v.y})) cands.push_back(x);
      for (const auto& x : crossings(a, b, {v.x, v.y - kFar}, {v.x, v.y + kFar})) cands.push_back(x);
    }
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  // Undominated pieces of each side, grouped by supporting line.
  std::map<std::vector<Rational>, std::vector<std::pair<Point, Point>>> by_line;
  for (const auto& [a, b] : all_sides) {
    std::vector<Point> on;
    for (const auto& c : cands) {
      if (between(a, b, c)) on.push_back(c);
    }
    std::sort(on.begin(), on.end());
    for (std::size_t k = 0; k + 1 < on.size(); ++k) {
      Point mid{(on[k].x + on[k + 1].x) / 2, (on[k].y + on[k + 1].y) / 2};
      if (dominated(r, mid)) continue;
      Rational la = on[k + 1].y - on[k].y;
      Rational lb = on[k].x - on[k + 1].x;
      Rational norm = la != 0 ? la : lb;
      la /= norm;
      lb /= norm;
      Rational lc = la * on[k].x + lb * on[k].y;
      by_line[{la, lb, lc}].emplace_back(on[k], on[k + 1]);
    }
  }
  std::vector<Polygon> out;
  std::vector<Polygon> segs;
  for (auto& [line, pieces] : by_line) {
    std::sort(pieces.begin(), pieces.end());
    Point s = pieces[0].first, e = pieces[0].second;
    for (std::size_t k = 1; k < pieces.size(); ++k) {
      if (!(e < pieces[k].first)) {
        if (e < pieces[k].second) e = pieces[k].second;
      } else {
        segs.push_back(Polygon::segment(s, e));
        s = pieces[k].first;
        e = pieces[k].second;
      }
    }
    segs.push_back(Polygon::segment(s, e));
  }
  out = segs;
  for (const auto& c : cands) {
    if (dominated(r, c)) continue;
    bool on_seg = false;
    for (const auto& s : segs) on_seg = on_seg || in_convex(s, c);
    // Candidates come from the region's boundary, but an isolated point must
    // still belong to the region.
    bool inside = false;
    for (const auto& part : r.parts()) inside = inside || in_convex(part, c);
    if (!on_seg && inside) out.push_back(Polygon::point(c));
  }
  return Region::from_polygons(std::move(out));
}

}  // namespace oracle
