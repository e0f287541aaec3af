#include "pgspi/game.hpp"

#include <map>

namespace pgspi {

using geom::Point;
using geom::Polygon;
using geom::Region;

Game::Game(std::vector<std::vector<std::string>> action_names,
           std::vector<PayoffVector> payoffs, FeasibleOptions options)
    : actions_(std::move(action_names)),
      payoffs_(std::move(payoffs)),
      options_(options) {
  if (actions_.size() < 2) throw DomainError("a game needs at least 2 players");
  std::size_t total = 1;
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (actions_[i].empty()) {
      throw DomainError("player " + std::to_string(i + 1) + " has no actions");
    }
    auto sorted = actions_[i];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw DomainError("player " + std::to_string(i + 1) +
                        " has duplicate action labels");
    }
    total *= actions_[i].size();
  }
  if (payoffs_.size() != total) {
    throw DomainError("payoff tensor has " + std::to_string(payoffs_.size()) +
                      " entries, expected " + std::to_string(total));
  }
  for (const auto& p : payoffs_) {
    if (p.size() != actions_.size()) {
      throw DomainError("payoff vector " + to_string(p) + " has wrong length");
    }
  }
  if (options_.resolution < 1) throw DomainError("resolution must be positive");

  if (exact_geometry()) {
    std::vector<Point> pts;
    for (const auto& p : payoffs_) pts.push_back(geom::to_point(p));
    hull_ = Polygon::hull(std::move(pts));
    feasible_ = Region::from_polygon(hull_);
    finish();
    return;
  }

  // Point-set approximation. One tag per distinct payoff: the smallest
  // outcome realizing it.
  std::map<PayoffVector, Outcome> best;
  auto offer = [&](const PayoffVector& u, const Outcome& o) {
    auto it = best.find(u);
    if (it == best.end() || o < it->second) best[u] = o;
  };
  for (std::size_t j = 0; j < payoffs_.size(); ++j) offer(payoffs_[j], Outcome::pure(j));
  if (!options_.pure_only) {
    const long res = options_.resolution;
    for (std::size_t a = 0; a < payoffs_.size(); ++a) {
      for (std::size_t b = a + 1; b < payoffs_.size(); ++b) {
        for (long k = 1; k < res; ++k) {
          Rational w(k, res);
          w.canonicalize();
          Outcome o = Outcome::mixture({{a, w}, {b, 1 - w}});
          offer(payoff(*this, o), o);
        }
      }
    }
  }
  std::vector<geom::TaggedPoint> tagged;
  for (auto& [u, o] : best) tagged.push_back({u, o});
  feasible_ = Region::from_points(std::move(tagged));
  finish();
}

void Game::finish() {
  efficient_ = geom::frontier(feasible_);
  auto verts = efficient_.vertex_payoffs();
  pmm_ = verts.front();
  for (const auto& v : verts) {
    for (std::size_t i = 0; i < pmm_.size(); ++i) pmm_[i] = std::min(pmm_[i], v[i]);
  }
}

std::size_t Game::action_index(std::size_t player, std::string_view label) const {
  const auto& acts = actions_.at(player);
  auto it = std::find(acts.begin(), acts.end(), label);
  if (it == acts.end()) {
    throw DomainError("unknown action \"" + std::string(label) + "\" for player " +
                      std::to_string(player + 1));
  }
  return static_cast<std::size_t>(it - acts.begin());
}

std::size_t Game::encode(const std::vector<std::size_t>& acts) const {
  if (acts.size() != actions_.size()) throw DomainError("joint action has wrong length");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (acts[i] >= actions_[i].size()) throw DomainError("action index out of range");
    idx = idx * actions_[i].size() + acts[i];
  }
  return idx;
}

std::vector<std::size_t> Game::decode(std::size_t joint) const {
  if (joint >= payoffs_.size()) throw DomainError("joint action index out of range");
  std::vector<std::size_t> out(actions_.size());
  for (std::size_t i = actions_.size(); i-- > 0;) {
    out[i] = joint % actions_[i].size();
    joint /= actions_[i].size();
  }
  return out;
}

std::size_t Game::joint_index(const std::vector<std::string>& labels) const {
  if (labels.size() != actions_.size()) {
    throw DomainError("joint action needs " + std::to_string(actions_.size()) +
                      " labels");
  }
  std::vector<std::size_t> acts;
  for (std::size_t i = 0; i < labels.size(); ++i) acts.push_back(action_index(i, labels[i]));
  return encode(acts);
}

std::string Game::joint_label(std::size_t joint) const {
  auto acts = decode(joint);
  std::string out = "(";
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (i) out += ", ";
    out += actions_[i][acts[i]];
  }
  return out + ")";
}

std::string Game::outcome_label(const Outcome& o) const {
  if (o.is_pure()) return joint_label(o.weights()[0].first);
  std::string out;
  for (const auto& [j, w] : o.weights()) {
    if (!out.empty()) out += " + ";
    out += to_string(w) + " " + joint_label(j);
  }
  return out;
}

PayoffVector payoff(const Game& game, const Outcome& outcome) {
  if (outcome.empty()) throw DomainError("empty outcome");
  PayoffVector u(std::vector<Rational>(game.player_count(), Rational(0)));
  for (const auto& [j, w] : outcome.weights()) {
    if (j >= game.joint_count()) {
      throw DomainError("outcome refers to joint action " + std::to_string(j) +
                        " outside the game");
    }
    const auto& p = game.pure_payoff(j);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += w * p[i];
  }
  return u;
}

bool dominates(const PayoffVector& x, const PayoffVector& y, Dominance mode) {
  if (x.size() != y.size()) {
    throw DomainError("dominance between vectors of different length");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (mode == Dominance::Weak ? x[i] < y[i] : x[i] <= y[i]) return false;
  }
  return true;
}

bool pareto_improves(const PayoffVector& x, const PayoffVector& y) {
  return dominates(x, y) && !(x == y);
}

Region efficient_outcomes(const Game& game) { return game.efficient(); }

PayoffVector pmm(const Game& game) { return game.pmm(); }

Rational best_feasible_payoff(const Game& game, std::size_t player) {
  if (player >= game.player_count()) throw DomainError("player index out of range");
  Rational best = game.pure_payoff(0)[player];
  for (const auto& p : game.pure_payoffs()) best = std::max(best, p[player]);
  return best;
}

PayoffVector pmp_floor(const Game& game, const PayoffVector& u) {
  PayoffVector g = pmm(game);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::max(g[i], u[i]);
  return g;
}

Region feasible_box(const Game& game, const std::vector<std::optional<Rational>>& lower,
                    const std::vector<std::optional<Rational>>& upper) {
  const std::size_t n = game.player_count();
  if (game.exact_geometry()) {
    Polygon p = game.hull();
    for (std::size_t k = 0; k < n && !p.empty(); ++k) {
      Rational a = k == 0 ? 1 : 0;
      Rational b = k == 0 ? 0 : 1;
      if (lower[k]) p = geom::clip(p, geom::HalfPlane{-a, -b, -*lower[k]});
      if (upper[k]) p = geom::clip(p, geom::HalfPlane{a, b, *upper[k]});
    }
    if (p.empty()) return {};
    return Region::from_polygon(std::move(p));
  }
  std::vector<geom::TaggedPoint> keep;
  for (const auto& t : game.feasible().points()) {
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      if (lower[k] && t.payoff[k] < *lower[k]) ok = false;
      if (upper[k] && t.payoff[k] > *upper[k]) ok = false;
    }
    if (ok) keep.push_back(t);
  }
  if (keep.empty()) return {};
  return Region::from_points(std::move(keep));
}

Region pmp_at(const Game& game, std::size_t player, const PayoffVector& u) {
  const std::size_t n = game.player_count();
  if (player >= n) throw DomainError("player index out of range");
  if (u.size() != n) throw DomainError("payoff vector has wrong length");
  PayoffVector m = pmp_floor(game, u);
  std::vector<std::optional<Rational>> lower(n), upper(n);
  for (std::size_t k = 0; k < n; ++k) {
    lower[k] = m[k];
    if (k != player) upper[k] = m[k];
  }
  return feasible_box(game, lower, upper);
}

Region pmp(const Game& game, std::size_t player, const Outcome& outcome) {
  return pmp_at(game, player, payoff(game, outcome));
}

Outcome realize(const Game& game, const PayoffVector& u) {
  if (!game.exact_geometry()) {
    for (const auto& t : game.feasible().points()) {
      if (t.payoff == u) return t.outcome;
    }
    throw DomainError("payoff " + to_string(u) + " is not in the feasible point set");
  }
  // Representatives: the first joint action for each distinct payoff.
  std::vector<std::size_t> reps;
  for (std::size_t j = 0; j < game.joint_count(); ++j) {
    bool seen = false;
    for (auto r : reps) seen = seen || game.pure_payoff(r) == game.pure_payoff(j);
    if (!seen) reps.push_back(j);
  }
  Point target = geom::to_point(u);
  auto pt = [&](std::size_t j) { return geom::to_point(game.pure_payoff(j)); };
  for (auto j : reps) {
    if (pt(j) == target) return Outcome::pure(j);
  }
  for (std::size_t a = 0; a < reps.size(); ++a) {
    for (std::size_t b = a + 1; b < reps.size(); ++b) {
      Point pa = pt(reps[a]), pb = pt(reps[b]);
      if (!Polygon::segment(pa, pb).contains(target)) continue;
      // target = lambda * pa + (1 - lambda) * pb
      Rational lambda = pa.x != pb.x ? (target.x - pb.x) / (pa.x - pb.x)
                                     : (target.y - pb.y) / (pa.y - pb.y);
      return Outcome::mixture({{reps[a], lambda}, {reps[b], 1 - lambda}});
    }
  }
  for (std::size_t a = 0; a < reps.size(); ++a) {
    for (std::size_t b = a + 1; b < reps.size(); ++b) {
      for (std::size_t c = b + 1; c < reps.size(); ++c) {
        Point pa = pt(reps[a]), pb = pt(reps[b]), pc = pt(reps[c]);
        Rational area = geom::orient(pa, pb, pc);
        if (area == 0) continue;
        Rational la = geom::orient(target, pb, pc) / area;
        Rational lb = geom::orient(pa, target, pc) / area;
        Rational lc = 1 - la - lb;
        if (la < 0 || lb < 0 || lc < 0) continue;
        return Outcome::mixture({{reps[a], la}, {reps[b], lb}, {reps[c], lc}});
      }
    }
  }
  throw DomainError("payoff " + to_string(u) + " is not feasible");
}

}  // namespace pgspi
