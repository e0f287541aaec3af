#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "pgspi/game.hpp"
#include "pgspi/geometry.hpp"
#include "pgspi/program.hpp"

namespace testing {

using pgspi::Rational;
using pgspi::geom::Point;
using pgspi::geom::Polygon;
using pgspi::geom::Region;

inline Rational R(std::string_view s) { return pgspi::parse_rational(s); }
inline Rational R(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}
inline Point P(long x, long y) { return {R(x), R(y)}; }

std::filesystem::path data_dir();
std::filesystem::path golden_dir();

pgspi::Game scheduling();
pgspi::Game game_2p(const std::vector<std::vector<std::pair<long, long>>>& table);

pgspi::Program constant(const std::string& a);
pgspi::Program match(const pgspi::Program& pattern, const std::string& then,
                     const pgspi::Program& otherwise, bool on_default = false);

// The depth-1 base space over actions: constants and single-branch matches on
// constant counterparts.
std::vector<pgspi::Program> depth1_space(const std::vector<std::string>& actions);

struct HaltingStats {
  std::size_t profiles = 0;
  std::size_t limits = 0;        // EvaluationLimit hits
  std::size_t renegotiated = 0;  // profiles that ran a renegotiation family
  int max_depth = 0;
  std::size_t max_rounds = 0;
};

// Random Scheduling Game profiles: match chains up to depth 6 whose patterns
// name other random programs, every program family, up to 4 rounds.
HaltingStats fuzz_halting(std::uint64_t seed, std::size_t profiles);

// Random rational point with coordinates k/den in [0, span].
Point random_point(std::mt19937_64& rng, long span, long den);
Polygon random_polygon(std::mt19937_64& rng, std::size_t max_vertices, long span = 4,
                       long den = 4);

}  // namespace testing

// Independent brute-force geometry, written without the library's clipping
// and sweep code.
namespace oracle {

using pgspi::geom::Point;
using pgspi::geom::Polygon;
using pgspi::geom::Region;

bool in_convex(const Polygon& p, const Point& q);
std::vector<Point> crossings(const Point& a, const Point& b, const Point& c, const Point& d);
Polygon intersect(const Polygon& a, const Polygon& b);
Region intersect(const Region& a, const Region& b);
bool dominated(const Region& r, const Point& p);
Region frontier(const Region& r);

}  // namespace oracle
