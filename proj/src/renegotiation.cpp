#include "pgspi/renegotiation.hpp"

#include <random>
#include <set>

namespace pgspi {

using geom::Polygon;
using geom::Region;

namespace {

std::string describe_drop(const PayoffVector& to, const PayoffVector& from) {
  for (std::size_t k = 0; k < to.size(); ++k) {
    if (to[k] < from[k]) {
      return "player " + std::to_string(k + 1) + " drops from " + to_string(from[k]) +
             " to " + to_string(to[k]);
    }
  }
  return "no drop";
}

std::vector<const SVRFunction*> others_of(const std::vector<SvrPtr>& profile, std::size_t i) {
  std::vector<const SVRFunction*> out;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j != i) out.push_back(profile[j].get());
  }
  return out;
}

}  // namespace

ValidationReport validate_reneg(const RenegFunction& r, const Game& game) {
  ValidationReport rep;
  rep.universe = std::to_string(r.rules().size()) + " mapped outcomes";
  for (const auto& [from, to] : r.rules()) {
    PayoffVector uf = payoff(game, from);
    PayoffVector ut = payoff(game, to);
    if (!dominates(ut, uf)) {
      rep.valid = false;
      rep.violations.push_back(game.outcome_label(from) + " -> " + game.outcome_label(to) +
                               " is not a weak improvement: " + describe_drop(ut, uf));
    } else if (!rep.strict_witness && pareto_improves(ut, uf)) {
      rep.strict_witness = game.outcome_label(from) + " " + to_string(uf) + " -> " +
                           game.outcome_label(to) + " " + to_string(ut);
    }
  }
  if (!rep.strict_witness) {
    rep.valid = false;
    rep.violations.push_back("no mapped outcome is a strict improvement for any player");
  }
  return rep;
}

ValidationReport validate_svr(const SVRFunction& rn, const Game& game,
                              const std::vector<SvrPtr>& universe) {
  ValidationReport rep;
  const std::size_t n = game.player_count();

  std::vector<Outcome> defaults;
  for (std::size_t j = 0; j < game.joint_count(); ++j) defaults.push_back(Outcome::pure(j));
  for (const auto& rule : rn.rules()) {
    if (rule.default_outcome) defaults.push_back(*rule.default_outcome);
    if (rule.region.kind() == RegionSpec::Kind::Box) {
      std::vector<std::optional<Rational>> none(n);
      for (const auto& v : feasible_box(game, none, rule.region.guard()).vertex_payoffs()) {
        defaults.push_back(realize(game, v));
      }
    }
  }
  try {
    defaults.push_back(realize(game, game.pmm()));
  } catch (const DomainError&) {
    // PMM need not be feasible in the point-set approximation.
  }
  std::sort(defaults.begin(), defaults.end());
  defaults.erase(std::unique(defaults.begin(), defaults.end()), defaults.end());

  const SVRFunction nobody("<unnamed counterpart>", {});
  std::vector<const SVRFunction*> cps;
  std::string names;
  for (const auto& c : universe) {
    cps.push_back(c.get());
    names += (names.empty() ? "" : ", ") + c->name();
  }
  if (cps.empty()) {
    cps.push_back(&nobody);
    names = "a counterpart no pattern names";
  }
  rep.universe = "counterparts {" + names + "}; " + std::to_string(defaults.size()) +
                 " default outcomes (pure profiles, rule defaults, guard corners, PMM)";

  for (const auto* c : cps) {
    std::vector<const SVRFunction*> others(n - 1, c);
    for (const auto& a : defaults) {
      PayoffVector ua = payoff(game, a);
      Region r = rn.evaluate(others, a, game);
      for (const auto& v : r.vertex_payoffs()) {
        if (!dominates(v, ua)) {
          rep.valid = false;
          rep.violations.push_back("counterpart " + c->name() + ", default " +
                                   game.outcome_label(a) + " " + to_string(ua) +
                                   ": region point " + to_string(v) +
                                   " is not a weak improvement (" + describe_drop(v, ua) + ")");
          break;
        }
        if (!rep.strict_witness && pareto_improves(v, ua)) {
          rep.strict_witness = "counterpart " + c->name() + ", default " +
                               game.outcome_label(a) + " " + to_string(ua) + " -> " +
                               to_string(v);
        }
      }
    }
  }
  if (!rep.strict_witness) {
    rep.valid = false;
    rep.violations.push_back("no region contains a strict improvement at any checked default");
  }
  return rep;
}

TransitivityReport check_transitive(
    const SelectionFunction& d,
    const std::vector<std::pair<Region, Region>>& samples, const Game& game) {
  TransitivityReport rep;
  for (const auto& [s, s2] : samples) {
    if (s.empty()) {
      ++rep.skipped;
      continue;
    }
    Selection x = d.select(s, game);
    if (geom::dominated_in(s, x.payoff)) {
      rep.counterexamples.push_back("D(S) = " + to_string(x.payoff) +
                                    " is dominated within S = " + geom::to_string(s));
      ++rep.checked;
      continue;
    }
    auto verts = s2.vertex_payoffs();
    bool dominating = !verts.empty() && std::all_of(verts.begin(), verts.end(), [&](const auto& v) {
      return dominates(v, x.payoff);
    });
    if (!dominating) {
      ++rep.skipped;
      continue;
    }
    ++rep.checked;
    Selection y = d.select(geom::unite(s, s2), game);
    if (!dominates(y.payoff, x.payoff)) {
      rep.counterexamples.push_back("D(S u S') = " + to_string(y.payoff) +
                                    " does not dominate D(S) = " + to_string(x.payoff) +
                                    " for S = " + geom::to_string(s) +
                                    ", S' = " + geom::to_string(s2));
    }
  }
  return rep;
}

namespace {

geom::Point random_point_in(const Polygon& p, std::mt19937_64& rng) {
  const auto& vs = p.vertices();
  std::uniform_int_distribution<long> w(0, 6);
  std::vector<long> ws(vs.size());
  long total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : ws) {
      x = w(rng);
      total += x;
    }
  }
  Rational px = 0, py = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Rational f(ws[i], total);
    f.canonicalize();
    px += f * vs[i].x;
    py += f * vs[i].y;
  }
  return {px, py};
}

Polygon random_polygon_in(const Polygon& p, std::size_t max_points, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> count(1, max_points);
  std::vector<geom::Point> pts;
  for (std::size_t k = count(rng); k > 0; --k) pts.push_back(random_point_in(p, rng));
  return Polygon::hull(std::move(pts));
}

}  // namespace

std::vector<std::pair<Region, Region>> transitivity_samples(const SelectionFunction& d,
                                                            const Game& game,
                                                            std::size_t count,
                                                            std::uint64_t seed) {
  if (!game.exact_geometry()) {
    throw DomainError("random region sampling needs an exact 2-player game");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution two_parts(0.25);
  std::vector<std::pair<Region, Region>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Polygon> parts{random_polygon_in(game.hull(), 4, rng)};
    if (two_parts(rng)) parts.push_back(random_polygon_in(game.hull(), 4, rng));
    Region s = Region::from_polygons(std::move(parts));
    PayoffVector x = d.select(s, game).payoff;
    Polygon q = geom::clip(game.hull(), geom::HalfPlane{-1, 0, -x[0]});
    q = geom::clip(q, geom::HalfPlane{0, -1, -x[1]});
    out.emplace_back(std::move(s), Region::from_polygon(random_polygon_in(q, 3, rng)));
  }
  return out;
}

ProgramTransform identity_transform() {
  return {"identity", [](std::size_t, const Program& p) { return p; }};
}

ProgramTransform make_reneg_spi(RenegPtr r, const Game& game) {
  auto rep = validate_reneg(*r, game);
  if (!rep.valid) {
    std::string why;
    for (const auto& v : rep.violations) why += "; " + v;
    throw DomainError("renegotiation function " + r->name() + " is invalid" + why);
  }
  return {"reneg:" + r->name(), [r](std::size_t, const Program& p) {
            if (p.kind() != Program::Kind::Base) {
              throw DomainError("the renegotiation transform applies to base programs");
            }
            return Program::reneg(p.default_program(), r);
          }};
}

ProgramTransform make_csr_spi(const std::vector<SvrPtr>& rn_profile, const Game& game,
                              const std::vector<std::vector<Program>>& default_space) {
  const std::size_t n = game.player_count();
  if (rn_profile.size() != n) throw DomainError("need one rule table per player");
  std::set<Outcome> seen;
  for_each_profile(default_space, [&](const std::vector<Program>& profile) {
    Outcome a = default_outcome(profile, game);
    if (!seen.insert(a).second) return;
    for (std::size_t i = 0; i < n; ++i) {
      Region y = pmp(game, i, a);
      Region rn = rn_profile[i]->evaluate(others_of(rn_profile, i), a, game);
      if (!geom::covers(rn, y)) {
        throw DomainError("player " + std::to_string(i + 1) + " at default " +
                          game.outcome_label(a) + ": PMP " + geom::to_string(y) +
                          " is not contained in " + rn_profile[i]->name() + " region " +
                          geom::to_string(rn));
      }
    }
  });
  std::string name = "csr:";
  for (std::size_t i = 0; i < n; ++i) name += (i ? "," : "") + rn_profile[i]->name();
  return {name, [rn_profile](std::size_t player, const Program& p) {
            if (p.kind() != Program::Kind::Base) {
              throw DomainError("the CSR transform applies to base programs");
            }
            return Program::csr(p.default_program(), rn_profile.at(player));
          }};
}

Program pmp_extend(const Program& p, std::size_t player, const Game& game,
                   const std::vector<std::vector<Program>>& universe,
                   const SelectionFunction& selection) {
  if (p.kind() != Program::Kind::Csr) {
    throw DomainError(std::string("PMP-extension needs a CSR program, got ") +
                      kind_name(p.kind()));
  }
  const SVRFunction& old = *p.svr();
  std::vector<SvrRule> added;
  for (const auto& q : universe) {
    if (q.size() + 1 != game.player_count()) {
      throw DomainError("counterpart profile has wrong length");
    }
    bool all_csr = std::all_of(q.begin(), q.end(), [](const Program& x) {
      return x.kind() == Program::Kind::Csr;
    });
    if (!all_csr) continue;
    auto full = with_player(q, player, p);
    Outcome a_def = default_outcome(full, game);
    Outcome a_p = evaluate(full, game, selection);
    std::vector<const SVRFunction*> others;
    CounterpartPattern pat;
    pat.kind = CounterpartPattern::Kind::ExtensionOf;
    for (const auto& x : q) {
      others.push_back(x.svr().get());
      pat.fingerprints.push_back(x.svr()->fingerprint());
    }
    bool dup = std::any_of(added.begin(), added.end(), [&](const SvrRule& r) {
      return r.counterpart.fingerprints == pat.fingerprints && *r.default_outcome == a_def;
    });
    if (dup) continue;
    Region matched = old.evaluate(others, a_def, game);
    Region y = pmp(game, player, a_p);
    if (geom::covers(matched, y)) continue;
    added.push_back({pat, a_def, RegionSpec::fixed(geom::unite(matched, y))});
  }
  if (added.empty()) return p;
  added.insert(added.end(), old.rules().begin(), old.rules().end());
  auto lineage = old.lineage();
  lineage.push_back(old.fingerprint());
  auto ext = std::make_shared<SVRFunction>(old.name() + "~", std::move(added), std::move(lineage));
  return Program::csr(p.default_program(), std::move(ext));
}

Region agreement_set(const std::vector<SvrPtr>& rn_profile, const Outcome& a,
                     const Game& game) {
  Region out;
  for (std::size_t i = 0; i < rn_profile.size(); ++i) {
    Region r = rn_profile[i]->evaluate(others_of(rn_profile, i), a, game);
    out = i == 0 ? r : geom::intersect(out, r);
  }
  return out;
}

std::vector<SvrPtr> translate_selection(const std::vector<SvrPtr>& rn_profile,
                                        const SelectionFunction& d_old, const Game& game,
                                        const std::vector<Outcome>& defaults) {
  std::vector<Outcome> ds = defaults;
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  std::vector<SvrRule> rules;
  for (const auto& a : ds) {
    Region i = agreement_set(rn_profile, a, game);
    if (i.empty()) {
      throw DomainError("empty agreement set at default " + game.outcome_label(a));
    }
    Selection s = d_old.select(i, game);
    Region single = i.mode() == Region::Mode::Points
                        ? Region::from_points({{s.payoff, s.outcome}})
                        : Region::from_polygon(Polygon::point(geom::to_point(s.payoff)));
    rules.push_back({CounterpartPattern{}, a, RegionSpec::fixed(std::move(single))});
  }
  std::vector<SvrPtr> out;
  for (const auto& f : rn_profile) {
    out.push_back(std::make_shared<SVRFunction>(f->name() + "'", rules));
  }
  return out;
}

}  // namespace pgspi
