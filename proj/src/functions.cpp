#include "pgspi/functions.hpp"

#include "pgspi/io.hpp"

namespace pgspi {

using geom::Region;

// ------------------------------------------------------------ RegionSpec

RegionSpec RegionSpec::fixed(Region r) {
  RegionSpec s;
  s.kind_ = Kind::Fixed;
  s.region_ = std::move(r);
  return s;
}

RegionSpec RegionSpec::box(std::vector<std::vector<Bound>> lower,
                           std::vector<std::vector<Bound>> upper,
                           std::vector<std::optional<Rational>> guard) {
  if (lower.size() != upper.size()) {
    throw DomainError("box template: lower and upper bound lists differ in length");
  }
  if (guard.empty()) guard.resize(lower.size());
  if (guard.size() != lower.size()) throw DomainError("box template: guard has wrong length");
  RegionSpec s;
  s.kind_ = Kind::Box;
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  s.guard_ = std::move(guard);
  return s;
}

RegionSpec RegionSpec::unite(std::vector<RegionSpec> parts) {
  RegionSpec s;
  s.kind_ = Kind::Union;
  s.parts_ = std::move(parts);
  return s;
}

namespace {

Rational resolve(const Bound& b, std::size_t k, const PayoffVector& ua,
                 const PayoffVector& g) {
  switch (b.kind) {
    case Bound::Kind::Absolute:
      return b.value;
    case Bound::Kind::Default:
      return ua[k];
    case Bound::Kind::Pmp:
      return std::max(g[k], ua[k]);
  }
  return b.value;
}

}  // namespace

Region RegionSpec::evaluate(const Game& game, const Outcome& a) const {
  switch (kind_) {
    case Kind::Fixed:
      return region_;
    case Kind::Union: {
      Region out;
      for (const auto& p : parts_) out = geom::unite(out, p.evaluate(game, a));
      return out;
    }
    case Kind::Box:
      break;
  }
  const std::size_t n = game.player_count();
  if (lower_.size() != n) {
    throw DomainError("box template has " + std::to_string(lower_.size()) +
                      " coordinates for a " + std::to_string(n) + "-player game");
  }
  PayoffVector ua = payoff(game, a);
  for (std::size_t k = 0; k < n; ++k) {
    if (guard_[k] && ua[k] > *guard_[k]) return {};
  }
  const PayoffVector& g = game.pmm();
  std::vector<std::optional<Rational>> lo(n), hi(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& b : lower_[k]) {
      Rational v = resolve(b, k, ua, g);
      if (!lo[k] || v > *lo[k]) lo[k] = v;
    }
    for (const auto& b : upper_[k]) {
      Rational v = resolve(b, k, ua, g);
      if (!hi[k] || v < *hi[k]) hi[k] = v;
    }
  }
  return feasible_box(game, lo, hi);
}

bool RegionSpec::anchored() const {
  switch (kind_) {
    case Kind::Fixed:
      return region_.empty();
    case Kind::Union:
      return std::all_of(parts_.begin(), parts_.end(),
                         [](const RegionSpec& p) { return p.anchored(); });
    case Kind::Box:
      break;
  }
  for (const auto& terms : lower_) {
    bool ok = std::any_of(terms.begin(), terms.end(), [](const Bound& b) {
      return b.kind != Bound::Kind::Absolute;
    });
    if (!ok) return false;
  }
  return true;
}

// ------------------------------------------------------- RenegFunction

RenegFunction::RenegFunction(std::string name,
                             std::vector<std::pair<Outcome, Outcome>> rules)
    : name_(std::move(name)) {
  for (auto& [from, to] : rules) {
    auto [it, inserted] = rules_.emplace(from, to);
    if (!inserted && !(it->second == to)) {
      throw DomainError("renegotiation function " + name_ +
                        " maps one outcome to two different targets");
    }
  }
  fingerprint_ = to_json(*this).dump();
}

Outcome RenegFunction::apply(const Outcome& a) const {
  auto it = rules_.find(a);
  return it == rules_.end() ? a : it->second;
}

// --------------------------------------------------------- SVRFunction

bool CounterpartPattern::matches(
    const std::vector<const SVRFunction*>& counterparts) const {
  if (kind == Kind::Any) return true;
  if (fingerprints.size() != counterparts.size()) return false;
  for (std::size_t k = 0; k < counterparts.size(); ++k) {
    const SVRFunction& c = *counterparts[k];
    if (c.fingerprint() == fingerprints[k]) continue;
    if (kind == Kind::ExtensionOf &&
        std::find(c.lineage().begin(), c.lineage().end(), fingerprints[k]) !=
            c.lineage().end()) {
      continue;
    }
    return false;
  }
  return true;
}

SVRFunction::SVRFunction(std::string name, std::vector<SvrRule> rules,
                         std::vector<std::string> lineage)
    : name_(std::move(name)), rules_(std::move(rules)), lineage_(std::move(lineage)) {
  fingerprint_ = to_json(*this).dump();
}

std::optional<std::size_t> SVRFunction::matched_rule(
    const std::vector<const SVRFunction*>& counterparts, const Outcome& a) const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& rule = rules_[i];
    if (rule.default_outcome && !(*rule.default_outcome == a)) continue;
    if (!rule.counterpart.matches(counterparts)) continue;
    return i;
  }
  return std::nullopt;
}

Region SVRFunction::evaluate(const std::vector<const SVRFunction*>& counterparts,
                             const Outcome& a, const Game& game) const {
  auto idx = matched_rule(counterparts, a);
  if (!idx) return {};
  return rules_[*idx].region.evaluate(game, a);
}

// ---------------------------------------------------- SelectionFunction

SelectionFunction SelectionFunction::weighted_sum(std::vector<Rational> weights) {
  if (weights.empty()) throw DomainError("weighted-sum selection needs weights");
  for (const auto& w : weights) {
    if (w <= 0) throw DomainError("selection weights must be positive");
  }
  SelectionFunction s;
  s.weights_ = std::move(weights);
  s.name_ = "weighted_sum";
  s.external_ = nullptr;
  return s;
}

SelectionFunction SelectionFunction::external(std::string name, External fn) {
  SelectionFunction s;
  s.weights_.clear();
  s.name_ = std::move(name);
  s.external_ = std::move(fn);
  return s;
}

std::string SelectionFunction::describe() const {
  if (external_) return name_ + " (external, approximate)";
  std::string out = "weighted_sum(";
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (i) out += ", ";
    out += to_string(weights_[i]);
  }
  return out + "), lexicographic tie-break";
}

namespace {

Outcome tag_for(const Region& s, const PayoffVector& u, const Game& game) {
  if (s.mode() == Region::Mode::Points) {
    for (const auto& t : s.points()) {
      if (t.payoff == u) return t.outcome;
    }
    throw InvariantViolation("selected payoff " + to_string(u) + " has no tag");
  }
  return realize(game, u);
}

}  // namespace

Selection SelectionFunction::select(const Region& s, const Game& game) const {
  if (s.empty()) throw DomainError("selection from an empty region");
  if (external_) {
    PayoffVector u = external_(s.vertex_payoffs());
    return {u, tag_for(s, u, game)};
  }
  if (s.mode() == Region::Mode::Points) {
    Region front = geom::frontier(s);
    const geom::TaggedPoint* best = nullptr;
    Rational best_score;
    for (const auto& t : front.points()) {
      if (t.payoff.size() != weights_.size()) {
        throw DomainError("selection weights do not match payoff dimension");
      }
      Rational score = 0;
      for (std::size_t i = 0; i < weights_.size(); ++i) score += weights_[i] * t.payoff[i];
      // Points are sorted by (payoff, outcome): the first maximizer is the
      // lexicographic tie-break winner.
      if (!best || score > best_score) {
        best = &t;
        best_score = score;
      }
    }
    return {best->payoff, best->outcome};
  }
  // Weights are positive, so a maximizing vertex is undominated and the
  // lexicographically smallest maximizer is a frontier vertex.
  std::optional<PayoffVector> best;
  Rational best_score;
  for (const auto& v : s.vertex_payoffs()) {
    if (v.size() != weights_.size()) {
      throw DomainError("selection weights do not match payoff dimension");
    }
    Rational score = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) score += weights_[i] * v[i];
    if (!best || score > best_score || (score == best_score && v < *best)) {
      best = v;
      best_score = score;
    }
  }
  return {*best, realize(game, *best)};
}

}  // namespace pgspi
