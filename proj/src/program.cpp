#include "pgspi/program.hpp"

#include "pgspi/io.hpp"

namespace pgspi {

BaseProgram BaseProgram::constant(std::string action) {
  BaseProgram b;
  b.fallback_ = std::move(action);
  return b;
}

BaseProgram BaseProgram::match(MatchPattern pattern, std::string action,
                               const BaseProgram& otherwise) {
  BaseProgram b;
  b.branches_.push_back({std::move(pattern), std::move(action)});
  b.branches_.insert(b.branches_.end(), otherwise.branches_.begin(),
                     otherwise.branches_.end());
  b.fallback_ = otherwise.fallback_;
  return b;
}

const std::string& BaseProgram::play(const std::string& counterpart_fp,
                                     const std::string& default_fp) const {
  for (const auto& br : branches_) {
    const std::string& seen =
        br.pattern.on == MatchPattern::On::Program ? counterpart_fp : default_fp;
    if (seen == br.pattern.fingerprint) return br.action;
  }
  return fallback_;
}

std::string fingerprint(const BaseProgram& b) { return to_json(b).dump(); }

Program Program::finish(Data d) {
  d.default_fingerprint = pgspi::fingerprint(d.def);
  Program p;
  p.d_ = std::make_shared<Data>(std::move(d));
  // to_json reads the shared data, so the fingerprint is filled in after.
  auto fp = to_json(p).dump();
  std::const_pointer_cast<Data>(p.d_)->fingerprint = std::move(fp);
  return p;
}

Program Program::base(BaseProgram b) {
  Data d;
  d.kind = Kind::Base;
  d.def = std::move(b);
  return finish(std::move(d));
}

Program Program::reneg(BaseProgram def, RenegPtr r) {
  if (!r) throw DomainError("renegotiation program without a function");
  Data d;
  d.kind = Kind::Reneg;
  d.def = std::move(def);
  d.r = std::move(r);
  return finish(std::move(d));
}

Program Program::csr(BaseProgram def, SvrPtr rn) {
  if (!rn) throw DomainError("CSR program without a function");
  Data d;
  d.kind = Kind::Csr;
  d.def = std::move(def);
  d.rounds = {std::move(rn)};
  return finish(std::move(d));
}

Program Program::icsr(BaseProgram def, std::vector<SvrPtr> rounds) {
  if (rounds.empty()) throw DomainError("ICSR program needs K >= 1 rounds");
  for (const auto& r : rounds) {
    if (!r) throw DomainError("ICSR round without a function");
  }
  Data d;
  d.kind = Kind::Icsr;
  d.def = std::move(def);
  d.rounds = std::move(rounds);
  return finish(std::move(d));
}

const char* kind_name(Program::Kind k) {
  switch (k) {
    case Program::Kind::Base:
      return "base";
    case Program::Kind::Reneg:
      return "reneg";
    case Program::Kind::Csr:
      return "csr";
    case Program::Kind::Icsr:
      return "icsr";
  }
  return "?";
}

Membership classify(const Program& p) {
  Membership m;
  m.kind = p.kind();
  m.default_fingerprint = p.default_fingerprint();
  switch (p.kind()) {
    case Program::Kind::Base:
      break;
    case Program::Kind::Reneg:
      m.function_fingerprints.push_back(p.reneg_function()->fingerprint());
      break;
    case Program::Kind::Csr:
    case Program::Kind::Icsr:
      for (const auto& r : p.rounds()) m.function_fingerprints.push_back(r->fingerprint());
      m.rounds = p.rounds().size();
      break;
  }
  return m;
}

std::vector<Program> with_player(const std::vector<Program>& counterparts,
                                 std::size_t player, const Program& p) {
  std::vector<Program> out = counterparts;
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(player), p);
  return out;
}

void for_each_profile(const std::vector<std::vector<Program>>& space,
                      const std::function<void(const std::vector<Program>&)>& fn) {
  for (const auto& s : space) {
    if (s.empty()) return;
  }
  std::vector<std::size_t> idx(space.size(), 0);
  std::vector<Program> profile;
  for (;;) {
    profile.clear();
    for (std::size_t i = 0; i < space.size(); ++i) profile.push_back(space[i][idx[i]]);
    fn(profile);
    std::size_t k = space.size();
    while (k > 0) {
      --k;
      if (++idx[k] < space[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (space.empty()) return;
  }
}

namespace {

std::string joined(std::span<const Program> profile, std::size_t skip, bool defaults) {
  std::vector<const std::string*> fps;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j == skip) continue;
    fps.push_back(defaults ? &profile[j].default_fingerprint() : &profile[j].fingerprint());
  }
  if (fps.size() == 1) return *fps[0];
  std::string out = "[";
  for (std::size_t k = 0; k < fps.size(); ++k) {
    if (k) out += ",";
    out += *fps[k];
  }
  return out + "]";
}

void check_limits(std::span<const Program> profile, const Game& game,
                  const EvalOptions& options) {
  if (profile.size() != game.player_count()) {
    throw DomainError("profile has " + std::to_string(profile.size()) +
                      " programs for a " + std::to_string(game.player_count()) +
                      "-player game");
  }
  for (const auto& p : profile) {
    if (p.default_program().chain_length() > options.max_chain) {
      throw EvaluationLimit("match chain of length " +
                            std::to_string(p.default_program().chain_length()) +
                            " exceeds the limit " + std::to_string(options.max_chain));
    }
  }
}

Outcome play_defaults(std::span<const Program> profile, const Game& game,
                      bool against_defaults) {
  std::vector<std::size_t> acts;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const std::string& label = profile[i].default_program().play(
        joined(profile, i, against_defaults), joined(profile, i, true));
    acts.push_back(game.action_index(i, label));
  }
  return Outcome::pure(game.encode(acts));
}

std::string family_of(std::span<const Program> profile) {
  Program::Kind k = profile[0].kind();
  for (const auto& p : profile) {
    if (p.kind() != k) return "mixed";
  }
  if (k == Program::Kind::Icsr) {
    for (const auto& p : profile) {
      if (p.rounds().size() != profile[0].rounds().size()) return "mixed";
    }
  }
  return kind_name(k);
}

Outcome run_round(std::span<const Program> profile, std::size_t round,
                  const Outcome& start, const Game& game,
                  const SelectionFunction& selection, RoundTrace* rt) {
  const std::size_t n = profile.size();
  geom::Region agreement;
  std::vector<geom::Region> regions;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<const SVRFunction*> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(profile[j].rounds()[round].get());
    }
    geom::Region r = profile[i].rounds()[round]->evaluate(others, start, game);
    agreement = i == 0 ? r : geom::intersect(agreement, r);
    regions.push_back(std::move(r));
  }
  Outcome result = start;
  std::optional<Selection> sel;
  if (!agreement.empty()) {
    sel = selection.select(agreement, game);
    if (!geom::contains(agreement, sel->payoff)) {
      throw InvariantViolation("selection " + selection.describe() + " returned " +
                               to_string(sel->payoff) +
                               ", which is outside the agreement set " +
                               geom::to_string(agreement));
    }
    if (!(payoff(game, sel->outcome) == sel->payoff)) {
      throw InvariantViolation("selected outcome does not realize its payoff " +
                               to_string(sel->payoff));
    }
    result = sel->outcome;
  }
  if (rt) {
    rt->start = start;
    rt->regions = std::move(regions);
    rt->agreement = std::move(agreement);
    rt->selected = std::move(sel);
  }
  return result;
}

}  // namespace

Outcome default_outcome(std::span<const Program> profile, const Game& game,
                        const EvalOptions& options) {
  check_limits(profile, game, options);
  return play_defaults(profile, game, true);
}

Outcome evaluate(std::span<const Program> profile, const Game& game,
                 const SelectionFunction& selection, EvalTrace* trace,
                 const EvalOptions& options) {
  check_limits(profile, game, options);
  EvalTrace local;
  EvalTrace& t = trace ? *trace : local;
  t = EvalTrace{};
  t.family = family_of(profile);

  if (t.family == "mixed" || t.family == "base") {
    // No renegotiation: defaults read the counterparts' full programs.
    t.result = play_defaults(profile, game, false);
    return t.result;
  }

  const Outcome a_def = play_defaults(profile, game, true);
  t.default_outcome = a_def;

  if (t.family == "reneg") {
    for (const auto& p : profile) t.proposals.push_back(p.reneg_function()->apply(a_def));
    t.agreed = std::all_of(t.proposals.begin(), t.proposals.end(),
                           [&](const Outcome& o) { return o == t.proposals[0]; });
    // On disagreement each default plays against the counterparts' defaults,
    // which is a_def again.
    t.result = t.agreed ? t.proposals[0] : a_def;
    return t.result;
  }

  Outcome current = a_def;
  const std::size_t rounds = profile[0].rounds().size();
  for (std::size_t k = 0; k < rounds; ++k) {
    RoundTrace rt;
    current = run_round(profile, k, current, game, selection, &rt);
    t.agreed = t.agreed || rt.selected.has_value();
    t.rounds.push_back(std::move(rt));
  }
  t.result = current;
  return t.result;
}

}  // namespace pgspi
