#include "pgspi/equilibrium.hpp"

#include <algorithm>
#include <set>

namespace pgspi {

using geom::Region;

namespace {

bool set_valued(const Program& p) {
  return p.kind() == Program::Kind::Csr || p.kind() == Program::Kind::Icsr;
}

Program as_default(const Program& p) { return Program::base(p.default_program()); }

// Position of player i's program among player j's counterparts.
std::size_t slot_of(std::size_t i, std::size_t j) { return i < j ? i : i - 1; }
std::size_t player_at(std::size_t slot, std::size_t j) { return slot < j ? slot : slot + 1; }

void push_unique(std::vector<Program>& out, const Program& p) {
  if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
}

void push_unique(std::vector<std::vector<Program>>& out, const std::vector<Program>& q) {
  if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
}

std::string describe(const BaseProgram& b) {
  if (b.branches().empty()) return "Const(" + b.fallback() + ")";
  return "Match[" + std::to_string(b.branches().size()) + "](" + b.branches().front().action +
         ", else " + b.fallback() + ")";
}

std::string describe(const Program& p) {
  switch (p.kind()) {
    case Program::Kind::Base:
      return describe(p.default_program());
    case Program::Kind::Reneg:
      return "Reneg(" + describe(p.default_program()) + ", " + p.reneg_function()->name() + ")";
    case Program::Kind::Csr:
      return "CSR(" + describe(p.default_program()) + ", " + p.svr()->name() + ")";
    case Program::Kind::Icsr: {
      std::string s = "ICSR(" + describe(p.default_program()) + ", [";
      for (std::size_t k = 0; k < p.rounds().size(); ++k) {
        s += (k ? ", " : "") + p.rounds()[k]->name();
      }
      return s + "])";
    }
  }
  return "?";
}

const Game& game_of(const Scenario& s) {
  if (!s.game) throw DomainError("scenario has no game");
  return *s.game;
}

Outcome run(const std::vector<Program>& profile, const Scenario& s) {
  return evaluate(profile, game_of(s), s.selection);
}

// Region of a set-valued program against a set-valued counterpart profile at
// their default outcome; first round for ICSR.
std::optional<Region> region_at(const Program& p, std::size_t player,
                                const std::vector<Program>& counterparts, const Game& game) {
  if (!set_valued(p)) return std::nullopt;
  std::vector<const SVRFunction*> others;
  for (const auto& q : counterparts) {
    if (q.kind() != p.kind()) return std::nullopt;
    others.push_back(q.svr().get());
  }
  Outcome a = default_outcome(with_player(counterparts, player, p), game);
  return p.svr()->evaluate(others, a, game);
}

bool wildcard_only(const Program& p) {
  for (const auto& f : p.rounds()) {
    for (const auto& r : f->rules()) {
      if (r.counterpart.kind != CounterpartPattern::Kind::Any) return false;
    }
  }
  return true;
}

// Counterpart profiles a player's extension is built against.
std::vector<std::vector<Program>> extension_universe(const Scenario& s, std::size_t player,
                                                     const std::vector<Program>& profile) {
  std::vector<std::vector<Program>> out;
  for (const auto& e : s.beliefs.at(player)) push_unique(out, e.counterparts);
  std::vector<Program> rest;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j != player) rest.push_back(profile[j]);
  }
  push_unique(out, rest);
  return out;
}

std::string universe_text(const Scenario& s, std::size_t candidates) {
  std::size_t support = 0;
  for (const auto& b : s.beliefs) support += b.size();
  return std::to_string(candidates) + " candidate profile(s), " + std::to_string(support) +
         " belief-support profile(s)";
}

}  // namespace

void validate_belief(const Belief& b, std::size_t players) {
  if (b.empty()) throw DomainError("belief has empty support");
  Rational total = 0;
  for (const auto& e : b) {
    if (e.prob <= 0) throw DomainError("belief probability " + to_string(e.prob) + " is not positive");
    if (e.counterparts.size() + 1 != players) {
      throw DomainError("belief entry names " + std::to_string(e.counterparts.size()) +
                        " counterpart program(s), expected " + std::to_string(players - 1));
    }
    total += e.prob;
  }
  if (total != 1) throw DomainError("belief probabilities sum to " + to_string(total) + ", not 1");
}

std::string Scenario::label(const Program& p) const {
  for (const auto& [name, q] : named) {
    if (q == p) return name;
  }
  return describe(p);
}

std::string Scenario::label(const std::vector<Program>& profile) const {
  std::string s = "(";
  for (std::size_t i = 0; i < profile.size(); ++i) s += (i ? ", " : "") + label(profile[i]);
  return s + ")";
}

Rational expected_payoff(const Program& p, std::size_t player, const Belief& belief,
                         const Game& game, const SelectionFunction& selection) {
  Rational eu = 0;
  for (const auto& e : belief) {
    Outcome o = evaluate(with_player(e.counterparts, player, p), game, selection);
    eu += e.prob * payoff(game, o)[player];
  }
  return eu;
}

std::vector<Program> best_response(const std::vector<Program>& space, std::size_t player,
                                   const Belief& belief, const Game& game,
                                   const SelectionFunction& selection, bool tie_preference) {
  if (space.empty()) throw DomainError("best response over an empty program space");
  std::vector<Program> best;
  Rational top;
  for (const auto& p : space) {
    Rational eu = expected_payoff(p, player, belief, game, selection);
    if (best.empty() || eu > top) {
      best.clear();
      top = eu;
    }
    if (eu == top) push_unique(best, p);
  }
  auto by_fp = [](const Program& a, const Program& b) { return a.fingerprint() < b.fingerprint(); };
  if (!tie_preference) {
    std::sort(best.begin(), best.end(), by_fp);
    return best;
  }
  // rank: how many tied regions this program's region strictly contains
  // across the belief support
  std::vector<std::vector<std::optional<Region>>> regions;
  for (const auto& p : best) {
    std::vector<std::optional<Region>> rs;
    for (const auto& e : belief) rs.push_back(region_at(p, player, e.counterparts, game));
    regions.push_back(std::move(rs));
  }
  auto strictly_larger = [&](std::size_t x, std::size_t y) {
    bool strict = false;
    for (std::size_t e = 0; e < belief.size(); ++e) {
      const auto& a = regions[x][e];
      const auto& b = regions[y][e];
      if (!a || !b) return false;
      if (!geom::covers(*a, *b)) return false;
      strict = strict || !geom::covers(*b, *a);
    }
    return strict;
  };
  std::vector<std::size_t> rank(best.size(), 0);
  for (std::size_t x = 0; x < best.size(); ++x) {
    for (std::size_t y = 0; y < best.size(); ++y) {
      if (x != y && strictly_larger(x, y)) ++rank[x];
    }
  }
  std::vector<std::size_t> order(best.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    bool rx = best[x].renegotiates(), ry = best[y].renegotiates();
    if (rx != ry) return rx;
    if (rank[x] != rank[y]) return rank[x] > rank[y];
    return by_fp(best[x], best[y]);
  });
  std::vector<Program> out;
  for (auto k : order) out.push_back(best[k]);
  return out;
}

EquilibriumReport check_subjective_equilibrium(const std::vector<Program>& profile,
                                               const Scenario& scenario) {
  const Game& g = game_of(scenario);
  if (profile.size() != g.player_count()) {
    throw DomainError("profile has " + std::to_string(profile.size()) + " programs for " +
                      std::to_string(g.player_count()) + " players");
  }
  EquilibriumReport rep;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    std::vector<Program> space = i < scenario.space.size() ? scenario.space[i] : std::vector<Program>{};
    push_unique(space, profile[i]);
    const Belief& belief = scenario.beliefs.at(i);
    PlayerReport pr;
    pr.player = i;
    for (const auto& p : space) {
      pr.utilities.emplace_back(p, expected_payoff(p, i, belief, g, scenario.selection));
    }
    pr.argmax = best_response(space, i, belief, g, scenario.selection, scenario.tie_preference);
    for (const auto& [p, eu] : pr.utilities) {
      if (p == profile[i]) pr.own = eu;
    }
    pr.best = std::find(pr.argmax.begin(), pr.argmax.end(), profile[i]) != pr.argmax.end();
    if (!pr.best) {
      for (const auto& [p, eu] : pr.utilities) {
        if (p == pr.argmax.front()) pr.better = std::make_pair(p, eu);
      }
    }
    rep.equilibrium = rep.equilibrium && pr.best;
    rep.players.push_back(std::move(pr));
  }
  rep.outcome = run(profile, scenario);
  rep.payoff = payoff(g, rep.outcome);
  return rep;
}

SpiReport verify_spi(const ProgramTransform& f, const std::vector<std::vector<Program>>& space,
                     const Game& game, const SelectionFunction& selection) {
  SpiReport rep;
  std::string sizes;
  for (const auto& s : space) sizes += (sizes.empty() ? "" : " x ") + std::to_string(s.size());
  rep.universe = "product space " + sizes;
  for_each_profile(space, [&](const std::vector<Program>& p) {
    ++rep.profiles;
    if (rep.violation) return;
    std::vector<Program> fp;
    for (std::size_t i = 0; i < p.size(); ++i) fp.push_back(f.apply(i, p[i]));
    PayoffVector before = payoff(game, evaluate(p, game, selection));
    PayoffVector after = payoff(game, evaluate(fp, game, selection));
    if (!dominates(after, before)) {
      rep.violation = p;
      rep.before = before;
      rep.after = after;
      return;
    }
    if (!rep.strict_witness && pareto_improves(after, before)) {
      rep.strict_witness = p;
      rep.before = before;
      rep.after = after;
    }
  });
  rep.passed = !rep.violation && rep.strict_witness.has_value();
  return rep;
}

NoPunishReport check_reneg_no_punish(const Scenario& scenario,
                                       const std::vector<std::vector<Program>>& candidates,
                                       RenegPtr r) {
  const Game& g = game_of(scenario);
  const std::size_t n = g.player_count();
  NoPunishReport rep;
  rep.universe = universe_text(scenario, candidates.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Program> own;
    auto consider = [&](const Program& p) {
      if (p.kind() == Program::Kind::Reneg) push_unique(own, p);
    };
    if (i < scenario.space.size()) {
      for (const auto& p : scenario.space[i]) consider(p);
    }
    for (const auto& c : candidates) {
      consider(c.at(i));
      if (r && c.at(i).kind() == Program::Kind::Base) {
        push_unique(own, Program::reneg(c[i].default_program(), r));
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (const auto& e : scenario.beliefs.at(j)) consider(e.counterparts.at(slot_of(i, j)));
    }

    for (const auto& p : own) {
      for (const auto& e : scenario.beliefs.at(i)) {
        auto full = with_player(e.counterparts, i, p);
        EvalTrace t;
        Outcome o = evaluate(full, g, scenario.selection, &t);
        if (t.family == "reneg" && t.agreed) continue;
        Outcome alt = run(with_player(e.counterparts, i, as_default(p)), scenario);
        ++rep.checks;
        if (!(o == alt)) {
          rep.violations.push_back(
              "clause 1, player " + std::to_string(i + 1) + ": support " +
              scenario.label(e.counterparts) + " plays " + g.outcome_label(o) + " against " +
              scenario.label(p) + " but " + g.outcome_label(alt) + " against its default");
        }
      }
    }

    for (const auto& c : candidates) {
      Program d = as_default(c.at(i));
      for (const auto& e : scenario.beliefs.at(i)) {
        std::vector<Program> plain = e.counterparts;
        bool any = false;
        for (auto& q : plain) {
          if (q.kind() == Program::Kind::Reneg) {
            q = as_default(q);
            any = true;
          }
        }
        if (!any) continue;
        Outcome o = run(with_player(e.counterparts, i, d), scenario);
        Outcome alt = run(with_player(plain, i, d), scenario);
        ++rep.checks;
        if (!(o == alt)) {
          rep.violations.push_back("clause 2, player " + std::to_string(i + 1) + ": default " +
                                   scenario.label(d) + " reaches " + g.outcome_label(o) +
                                   " against " + scenario.label(e.counterparts) + " but " +
                                   g.outcome_label(alt) + " against their defaults");
        }
      }
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

NoPunishReport check_csr_no_punish(const Scenario& scenario,
                                     const std::vector<std::vector<Program>>& candidates) {
  const Game& g = game_of(scenario);
  const std::size_t n = g.player_count();
  NoPunishReport rep;
  rep.universe = universe_text(scenario, candidates.size()) +
                 "; clause (ii) at every pure outcome and each default outcome";
  auto strip = [](std::vector<Program> q) {
    bool any = false;
    for (auto& x : q) {
      if (set_valued(x)) {
        x = as_default(x);
        any = true;
      }
    }
    return std::make_pair(q, any);
  };

  for (std::size_t i = 0; i < n; ++i) {
    // clause (i), candidate components facing set-valued counterparts
    for (const auto& c : candidates) {
      const Program& x = c.at(i);
      if (set_valued(x)) continue;
      std::vector<std::vector<Program>> facing;
      for (const auto& e : scenario.beliefs.at(i)) push_unique(facing, e.counterparts);
      std::vector<Program> rest;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) rest.push_back(c[j]);
      }
      push_unique(facing, rest);
      for (const auto& q : facing) {
        auto [plain, any] = strip(q);
        if (!any) continue;
        Outcome o = run(with_player(q, i, x), scenario);
        Outcome alt = run(with_player(plain, i, x), scenario);
        ++rep.checks;
        if (!(o == alt)) {
          rep.violations.push_back("clause (i), player " + std::to_string(i + 1) + ": " +
                                   scenario.label(x) + " reaches " + g.outcome_label(o) +
                                   " against " + scenario.label(q) + " but " +
                                   g.outcome_label(alt) + " against their defaults");
        }
      }
    }

    for (const auto& c : candidates) {
      const Program& p = c.at(i);
      if (!set_valued(p)) continue;
      std::vector<Program> variants{p};
      if (p.kind() == Program::Kind::Csr) {
        push_unique(variants, pmp_extend(p, i, g, extension_universe(scenario, i, c),
                                         scenario.selection));
      }
      for (const auto& e : scenario.beliefs.at(i)) {
        // clause (i), support programs facing this candidate and its extension
        for (std::size_t k = 0; k < e.counterparts.size(); ++k) {
          const Program& s = e.counterparts[k];
          if (set_valued(s)) continue;
          for (const auto& v : variants) {
            Outcome o = run(with_player(e.counterparts, i, v), scenario);
            Outcome alt = run(with_player(e.counterparts, i, as_default(v)), scenario);
            ++rep.checks;
            if (!(o == alt)) {
              rep.violations.push_back(
                  "clause (i), player " + std::to_string(player_at(k, i) + 1) + ": support " +
                  scenario.label(s) + " reaches " + g.outcome_label(o) + " against " +
                  scenario.label(v) + " but " + g.outcome_label(alt) + " against its default");
            }
          }
        }

        // clause (ii)
        bool all_sv = std::all_of(e.counterparts.begin(), e.counterparts.end(), set_valued);
        if (!all_sv) continue;
        bool icsr = p.kind() == Program::Kind::Icsr ||
                    std::any_of(e.counterparts.begin(), e.counterparts.end(),
                                [](const Program& q) { return q.kind() == Program::Kind::Icsr; });
        if (icsr) {
          for (const auto& q : e.counterparts) {
            ++rep.checks;
            if (q.kind() == Program::Kind::Icsr && !wildcard_only(q)) {
              rep.violations.push_back("clause (ii), player " + std::to_string(i + 1) +
                                       ": iterated support program " + scenario.label(q) +
                                       " conditions on its counterpart");
            }
          }
          continue;
        }
        const Program& ext = variants.back();
        auto full = with_player(e.counterparts, i, p);
        Region y = pmp(g, i, run(full, scenario));
        std::vector<Outcome> outcomes;
        for (std::size_t a = 0; a < g.joint_count(); ++a) outcomes.push_back(Outcome::pure(a));
        outcomes.push_back(default_outcome(full, g));
        for (std::size_t k = 0; k < e.counterparts.size(); ++k) {
          const std::size_t j = player_at(k, i);
          std::vector<const SVRFunction*> old_others, new_others;
          for (std::size_t m = 0; m < n; ++m) {
            if (m == j) continue;
            if (m == i) {
              old_others.push_back(p.svr().get());
              new_others.push_back(ext.svr().get());
            } else {
              old_others.push_back(e.counterparts[slot_of(m, i)].svr().get());
              new_others.push_back(old_others.back());
            }
          }
          const SVRFunction& rn = *e.counterparts[k].svr();
          for (const auto& a : outcomes) {
            Region before = rn.evaluate(old_others, a, g);
            Region after = rn.evaluate(new_others, a, g);
            ++rep.checks;
            std::string where = "clause (ii), player " + std::to_string(j + 1) + " support " +
                                scenario.label(e.counterparts[k]) + " at " + g.outcome_label(a);
            if (!geom::covers(after, before)) {
              rep.violations.push_back(where + ": region shrinks against the extension of " +
                                       scenario.label(p));
            } else if (!geom::covers(geom::unite(before, y), after)) {
              rep.violations.push_back(where + ": region gains points outside player " +
                                       std::to_string(i + 1) + "'s PMP");
            }
          }
        }
      }
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

std::vector<Program> pmp_extend_profile(const std::vector<Program>& profile,
                                        const Scenario& scenario) {
  const Game& g = game_of(scenario);
  std::vector<Program> out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out.push_back(pmp_extend(profile[i], i, g, extension_universe(scenario, i, profile),
                             scenario.selection));
  }
  return out;
}

ExtensionReport theorem3_extend_and_verify(const std::vector<Program>& profile,
                                           const Scenario& scenario) {
  const Game& g = game_of(scenario);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i].kind() != Program::Kind::Csr) {
      throw DomainError("precondition failed: player " + std::to_string(i + 1) +
                        " does not use a CSR program");
    }
  }
  NoPunishReport a = check_csr_no_punish(scenario, {profile});
  if (!a.passed) {
    throw DomainError("precondition failed: CSR no-punishment, " + a.violations.front());
  }
  ExtensionReport rep;
  if (scenario.selection.is_weighted_sum() && !g.exact_geometry()) {
    rep.transitivity = "weighted-sum argmax over a point set, accepted without sampling";
  } else if (g.exact_geometry()) {
    const std::size_t samples = 400;
    auto pairs = transitivity_samples(scenario.selection, g, samples, 17);
    TransitivityReport t = check_transitive(scenario.selection, pairs, g);
    if (!t.passed()) {
      throw DomainError("precondition failed: selection transitivity, " +
                        t.counterexamples.front());
    }
    rep.transitivity = "check_transitive passed on " + std::to_string(t.checked) +
                       " sampled region pairs";
  } else {
    throw DomainError(
        "precondition failed: selection transitivity cannot be checked for an external "
        "selection on a point-set game");
  }

  rep.extended = pmp_extend_profile(profile, scenario);
  EquilibriumReport before = check_subjective_equilibrium(profile, scenario);
  EquilibriumReport after = check_subjective_equilibrium(rep.extended, scenario);
  rep.equilibrium_before = before.equilibrium;
  rep.equilibrium_after = after.equilibrium;
  rep.payoff_before = before.payoff;
  rep.payoff_after = after.payoff;
  rep.eu_never_lower = true;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    rep.eu_before.push_back(before.players[i].own);
    rep.eu_after.push_back(after.players[i].own);
    rep.eu_never_lower = rep.eu_never_lower && rep.eu_after[i] >= rep.eu_before[i];
  }
  rep.equilibrium_kept = !rep.equilibrium_before || rep.equilibrium_after;
  rep.above_pmm = dominates(rep.payoff_after, g.pmm());
  rep.passed = rep.eu_never_lower && rep.equilibrium_kept && rep.above_pmm;
  return rep;
}

IncentiveReport check_renegotiation_incentive(const Scenario& scenario, RenegPtr r) {
  const Game& g = game_of(scenario);
  if (!r) throw DomainError("renegotiation incentive check needs a renegotiation function");
  ProgramTransform wrap = make_reneg_spi(r, g);
  std::vector<std::vector<Program>> argmax;
  for (std::size_t i = 0; i < g.player_count(); ++i) {
    argmax.push_back(best_response(scenario.space.at(i), i, scenario.beliefs.at(i), g,
                                   scenario.selection, scenario.tie_preference));
  }
  std::vector<std::vector<Program>> equilibria;
  for_each_profile(argmax, [&](const std::vector<Program>& p) { equilibria.push_back(p); });

  IncentiveReport rep;
  rep.equilibria = equilibria.size();
  rep.no_punish = check_reneg_no_punish(scenario, equilibria, r);
  bool all = true;
  for (const auto& e : equilibria) {
    bool plain = std::any_of(e.begin(), e.end(),
                             [](const Program& p) { return p.kind() != Program::Kind::Reneg; });
    if (!plain) continue;
    IncentiveCase c;
    c.equilibrium = e;
    for (std::size_t i = 0; i < e.size(); ++i) {
      c.wrapped.push_back(e[i].kind() == Program::Kind::Base ? wrap.apply(i, e[i]) : e[i]);
    }
    EquilibriumReport before = check_subjective_equilibrium(e, scenario);
    EquilibriumReport after = check_subjective_equilibrium(c.wrapped, scenario);
    c.passed = after.equilibrium;
    for (std::size_t i = 0; i < e.size(); ++i) {
      c.eu_before.push_back(before.players[i].own);
      c.eu_after.push_back(after.players[i].own);
      c.passed = c.passed && c.eu_after[i] >= c.eu_before[i];
    }
    c.wrapped_equilibrium = after.equilibrium;
    all = all && c.passed;
    rep.cases.push_back(std::move(c));
  }
  rep.passed = rep.no_punish.passed && all;
  return rep;
}

TightnessResult build_tightness_scenario(std::shared_ptr<const Game> game, std::size_t k,
                                         const PayoffVector& delta) {
  if (!game) throw DomainError("tightness construction needs a game");
  const Game& g = *game;
  std::vector<std::string> failures;
  if (g.player_count() != 2 || !g.exact_geometry()) {
    throw DomainError("hypothesis failed: two-player game with mixing");
  }
  if (k < 1) failures.push_back("K >= 1");
  if (delta.size() != 2 || delta[0] <= 0 || delta[1] <= 0) failures.push_back("delta > 0");
  if (!failures.empty()) throw DomainError("hypothesis failed: " + failures.front());

  const PayoffVector gm = g.pmm();
  PayoffVector top{best_feasible_payoff(g, 0), best_feasible_payoff(g, 1)};
  PayoffVector raised{gm[0] + delta[0], gm[1] + delta[1]};

  bool constant_sum = true;
  for (const auto& u : g.pure_payoffs()) {
    constant_sum = constant_sum && u[0] + u[1] == g.pure_payoff(0)[0] + g.pure_payoff(0)[1];
  }
  if (constant_sum) failures.push_back("non-zero-sum (every outcome has the same payoff sum)");
  if (!geom::contains(g.feasible(), raised)) {
    failures.push_back("PMM + delta " + to_string(raised) + " is feasible");
  }
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t j = 1 - i;
    std::vector<std::optional<Rational>> lo(2), hi(2);
    lo[i] = hi[i] = top[i];
    Region line = feasible_box(g, lo, hi);
    for (const auto& v : line.vertex_payoffs()) {
      if (v[j] >= top[j]) {
        failures.push_back("player " + std::to_string(i + 1) + "'s best payoff leaves player " +
                           std::to_string(j + 1) + " below their best");
        break;
      }
    }
  }
  std::optional<std::size_t> low;
  for (std::size_t a = 0; a < g.joint_count() && !low; ++a) {
    if (dominates(gm, g.pure_payoff(a))) low = a;
  }
  if (!low) failures.push_back("some pure profile is weakly below the PMM");
  if (!failures.empty()) {
    std::string msg = "hypothesis failed: " + failures.front();
    for (std::size_t f = 1; f < failures.size(); ++f) msg += "; " + failures[f];
    throw DomainError(msg);
  }

  TightnessReport rep;
  rep.k = k;
  rep.delta = delta;
  rep.pmm = gm;
  rep.best = top;
  const Rational kk(static_cast<long>(k));
  PayoffVector lower_end;  // L_i: what the y type concedes by round K - 1
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t j = 1 - i;
    std::vector<std::optional<Rational>> lo(2), hi(2);
    lo[j] = hi[j] = raised[j];
    Rational m;
    bool first = true;
    for (const auto& v : feasible_box(g, lo, hi).vertex_payoffs()) {
      if (first || v[i] > m) m = v[i];
      first = false;
    }
    rep.epsilon.values.push_back(top[i] - m);
    Rational l = gm[i] + (kk - 1) / kk * (top[i] - rep.epsilon[i] - gm[i]);
    lower_end.values.push_back(l);
    rep.threshold.values.push_back((top[i] - rep.epsilon[i] - l) / (top[i] - l));
    rep.belief_mix_weight.values.push_back(rep.threshold[i] / 2);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    if (rep.epsilon[i] <= 0) {
      throw DomainError("hypothesis failed: player " + std::to_string(i + 1) +
                        " can reach their best payoff while the other gets PMM + delta");
    }
  }

  auto frac = [&](std::size_t r) -> Rational { return Rational(static_cast<long>(r)) / kk; };
  // Round-r set of a program that caps player `capped` at cap(r).
  auto capped_rounds = [&](const std::string& name, std::size_t capped,
                           const std::function<Rational(std::size_t)>& cap,
                           std::optional<Rational> final_floor = std::nullopt) {
    std::vector<SvrPtr> rounds;
    for (std::size_t r = 1; r <= k; ++r) {
      std::vector<std::vector<Bound>> lower{{Bound::pmp()}, {Bound::pmp()}};
      std::vector<std::vector<Bound>> upper(2);
      std::vector<std::optional<Rational>> guard(2);
      upper[capped].push_back(Bound::absolute(cap(r)));
      guard[capped] = cap(r);
      if (r == k && final_floor) lower[1 - capped].push_back(Bound::absolute(*final_floor));
      SvrRule rule{CounterpartPattern{}, std::nullopt,
                   RegionSpec::box(std::move(lower), std::move(upper), std::move(guard))};
      rounds.push_back(std::make_shared<SVRFunction>(name + "_" + std::to_string(r),
                                                     std::vector<SvrRule>{rule}));
    }
    return rounds;
  };

  Scenario s;
  s.name = "tightness";
  s.game = game;
  s.space.resize(2);
  s.beliefs.resize(2);
  std::vector<BaseProgram> defaults;
  for (std::size_t i = 0; i < 2; ++i) {
    defaults.push_back(BaseProgram::constant(g.actions(i)[g.decode(*low)[i]]));
  }
  auto add = [&](const std::string& name, Program p) {
    s.named.emplace(name, p);
    return p;
  };

  std::vector<Program> profile;
  std::vector<std::pair<Program, Program>> types;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t j = 1 - i;
    const std::string me = std::to_string(i + 1), other = std::to_string(j + 1);
    // i's own program caps the other player at g_j + (r/K) delta_j
    Program p = add("p" + me,
                    Program::icsr(defaults[i], capped_rounds("rn" + me, j, [&](std::size_t r) -> Rational {
                                    return gm[j] + frac(r) * delta[j];
                                  })));
    profile.push_back(p);
    s.space[i].push_back(p);
    // counterpart types, as player j programs capping player i
    Program x = add("x" + other,
                    Program::icsr(defaults[j], capped_rounds("x" + other, i, [&](std::size_t r) -> Rational {
                                    return gm[i] + frac(r) * (top[i] - gm[i]);
                                  })));
    Program y = add("y" + other,
                    Program::icsr(defaults[j],
                                  capped_rounds(
                                      "y" + other, i,
                                      [&](std::size_t r) -> Rational {
                                        return gm[i] + frac(r) * (top[i] - rep.epsilon[i] - gm[i]);
                                      },
                                      raised[j])));
    types.emplace_back(x, y);
    s.beliefs[i] = {{{x}, rep.belief_mix_weight[i]}, {{y}, 1 - rep.belief_mix_weight[i]}};

    // deviations
    const std::vector<std::pair<std::string, Rational>> concessions{
        {"0", Rational(0)}, {"half", delta[j] / 2}, {"double", delta[j] * 2}};
    for (const auto& [tag, c] : concessions) {
      Rational conc = c;
      push_unique(s.space[i],
                  add("p" + me + "_concede_" + tag,
                      Program::icsr(defaults[i],
                                    capped_rounds("rn" + me + "_" + tag, j, [&](std::size_t r) -> Rational {
                                      return gm[j] + frac(r) * conc;
                                    }))));
    }
    push_unique(s.space[i],
                add("p" + me + "_hold_last",
                    Program::icsr(defaults[i],
                                  capped_rounds("rn" + me + "_hold", j, [&](std::size_t r) -> Rational {
                                    return gm[j] + frac(r == k ? r - 1 : r) * delta[j];
                                  }))));
    auto empty = std::make_shared<SVRFunction>(
        "empty", std::vector<SvrRule>{{CounterpartPattern{}, std::nullopt, RegionSpec{}}});
    push_unique(s.space[i], add("p" + me + "_refuse",
                                Program::icsr(defaults[i], std::vector<SvrPtr>(k, empty))));
    for (const auto& a : g.actions(i)) {
      push_unique(s.space[i], Program::base(BaseProgram::constant(a)));
    }
  }
  s.profile = profile;

  rep.equilibrium_report = check_subjective_equilibrium(profile, s);
  rep.equilibrium = rep.equilibrium_report.equilibrium;
  EvalTrace t;
  evaluate(profile, g, s.selection, &t);
  rep.chain.push_back(payoff(g, *t.default_outcome));
  for (const auto& round : t.rounds) {
    rep.chain.push_back(round.selected ? round.selected->payoff : payoff(g, round.start));
  }
  rep.strictly_increasing = rep.chain.size() == k + 1;
  for (std::size_t r = 1; r < rep.chain.size(); ++r) {
    rep.strictly_increasing =
        rep.strictly_increasing && dominates(rep.chain[r], rep.chain[r - 1], Dominance::Strict);
  }
  rep.within_bound = dominates(raised, rep.chain.back());
  rep.no_punish_report = check_csr_no_punish(s, {profile});
  rep.no_punish_ok = rep.no_punish_report.passed;
  return {std::move(s), std::move(rep)};
}

}  // namespace pgspi
