#include "pgspi/scenario.hpp"

#include <algorithm>

namespace pgspi {

namespace {

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(where + ": missing \"" + key + "\"");
  }
  return j.at(key);
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string, got " + j.dump());
  return j.get<std::string>();
}

Program lookup(const Scenario& s, const std::string& name) {
  auto it = s.named.find(name);
  if (it == s.named.end()) throw DomainError("unknown program name \"" + name + "\"");
  return it->second;
}

}  // namespace

std::vector<Program> depth1_space(const Game& game, std::size_t player) {
  if (game.player_count() != 2) throw DomainError("the depth-1 space is defined for two players");
  const auto& own = game.actions(player);
  const auto& other = game.actions(1 - player);
  std::vector<Program> out;
  for (const auto& a : own) out.push_back(Program::base(BaseProgram::constant(a)));
  for (const auto& x : other) {
    MatchPattern pat;
    pat.fingerprint = Program::base(BaseProgram::constant(x)).fingerprint();
    for (const auto& a : own) {
      for (const auto& b : own) {
        out.push_back(Program::base(BaseProgram::match(pat, a, BaseProgram::constant(b))));
      }
    }
  }
  return out;
}

SelectionFunction parse_selection(const Json& j) {
  if (j.is_null()) return SelectionFunction{};
  std::vector<Rational> w;
  for (const auto& x : need(j, "weights", "selection")) w.push_back(parse_rational_json(x));
  std::string tie = j.value("tie_break", std::string("lex"));
  if (tie != "lex") throw ParseError("selection.tie_break: only \"lex\" is supported, got \"" + tie + "\"");
  return SelectionFunction::weighted_sum(std::move(w));
}

ProgramTransform parse_transform(const Json& j, const Scenario& s) {
  const Game& g = *s.game;
  auto reneg = [&](const std::string& name) {
    auto it = s.functions.reneg.find(name);
    if (it == s.functions.reneg.end()) throw ParseError("unknown renegotiation function \"" + name + "\"");
    return it->second;
  };
  if (j == "identity") return identity_transform();
  if (j.is_object() && j.contains("reneg")) return make_reneg_spi(reneg(text(j.at("reneg"), "transform.reneg")), g);
  if (j.is_object() && j.contains("csr")) {
    std::vector<SvrPtr> rn;
    for (const auto& x : j.at("csr")) {
      std::string name = text(x, "transform.csr");
      auto it = s.functions.svr.find(name);
      if (it == s.functions.svr.end()) throw ParseError("unknown set-valued function \"" + name + "\"");
      rn.push_back(it->second);
    }
    return make_csr_spi(rn, g, s.space);
  }
  throw ParseError("transform: expected \"identity\", {\"reneg\": name} or {\"csr\": [names]}");
}

ScenarioFile parse_scenario(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ParseError("scenario: expected an object");
  ScenarioFile file;
  Scenario& s = file.scenario;
  s.name = j.value("name", std::string("scenario"));

  FeasibleOptions opts;
  if (j.contains("feasible")) {
    const Json& f = j.at("feasible");
    opts.pure_only = f.value("pure_only", false);
    opts.resolution = f.value("resolution", 12);
  }
  const Json& gj = need(j, "game", "scenario");
  if (gj.is_string()) {
    s.game = std::make_shared<const Game>(load_game(base_dir / gj.get<std::string>(), opts));
  } else {
    s.game = std::make_shared<const Game>(parse_game(gj, opts));
  }
  const Game& g = *s.game;
  const std::size_t n = g.player_count();

  if (j.contains("function_table")) {
    const Json& t = j.at("function_table");
    s.functions = t.is_string() ? parse_function_table(read_json_file(base_dir / t.get<std::string>()), g)
                                : parse_function_table(t, g);
  }

  auto define = [&](const std::string& name, const Json& def) {
    if (s.named.count(name)) throw ParseError("program \"" + name + "\" defined twice");
    Program p = parse_program(def, g, s.functions, s.named);
    s.named.emplace(name, p);
    return p;
  };
  if (j.contains("definitions")) {
    const Json& defs = j.at("definitions");
    if (!defs.is_object()) throw ParseError("definitions: expected an object of named programs");
    for (const auto& [name, def] : defs.items()) define(name, def);
  }
  auto program_ref = [&](const Json& x, const std::string& where) {
    if (x.is_string()) return lookup(s, x.get<std::string>());
    if (x.is_object() && x.contains("name")) return define(text(x.at("name"), where), x);
    return parse_program(x, g, s.functions, s.named);
  };

  s.space.assign(n, {});
  if (j.contains("programs")) {
    const Json& ps = j.at("programs");
    if (ps == "depth1") {
      for (std::size_t i = 0; i < n; ++i) {
        s.space[i] = depth1_space(g, i);
        for (const auto& p : s.space[i]) {
          const BaseProgram& b = p.default_program();
          std::string name = "Const(" + b.fallback() + ")";
          if (!b.branches().empty()) {
            // the pattern is a constant counterpart, recover its action for the name
            std::string x;
            for (const auto& a : g.actions(1 - i)) {
              if (Program::base(BaseProgram::constant(a)).fingerprint() == b.branches()[0].pattern.fingerprint) x = a;
            }
            name = "If(" + x + ")" + b.branches()[0].action + "Else" + b.fallback();
          }
          s.named.emplace(name, p);
        }
      }
    } else {
      if (!ps.is_array() || ps.size() != n) {
        throw ParseError("programs: expected one list per player");
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& x : ps[i]) {
          Program p = program_ref(x, "programs");
          if (std::find(s.space[i].begin(), s.space[i].end(), p) == s.space[i].end()) {
            s.space[i].push_back(p);
          }
        }
      }
    }
  }

  s.beliefs.assign(n, {});
  if (j.contains("beliefs")) {
    const Json& bs = j.at("beliefs");
    if (!bs.is_array() || bs.size() != n) throw ParseError("beliefs: expected one list per player");
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& e : bs[i]) {
        BeliefEntry entry;
        const Json& prof = need(e, "profile", "belief entry");
        if (!prof.is_array()) throw ParseError("belief profile: expected a list of programs");
        for (const auto& x : prof) entry.counterparts.push_back(program_ref(x, "belief profile"));
        entry.prob = parse_rational_json(need(e, "prob", "belief entry"));
        s.beliefs[i].push_back(std::move(entry));
      }
      validate_belief(s.beliefs[i], n);
    }
  }

  s.selection = parse_selection(j.value("selection", Json()));
  if (s.selection.weights().size() != n) throw ParseError("selection: need one weight per player");
  s.tie_preference = j.value("tie_preference", true);
  if (j.contains("profile")) {
    std::vector<Program> prof;
    for (const auto& x : j.at("profile")) prof.push_back(program_ref(x, "profile"));
    if (prof.size() != n) throw ParseError("profile: need one program per player");
    s.profile = prof;
  }
  if (j.contains("reneg")) {
    std::string name = text(j.at("reneg"), "reneg");
    auto it = s.functions.reneg.find(name);
    if (it == s.functions.reneg.end()) throw ParseError("unknown renegotiation function \"" + name + "\"");
    s.reneg = it->second;
  }
  if (j.contains("transform")) file.transform = parse_transform(j.at("transform"), s);
  return file;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  Json j = read_json_file(path);
  try {
    ScenarioFile f = parse_scenario(j, path.parent_path());
    if (!j.contains("name")) f.scenario.name = path.stem().string();
    f.path = path;
    return f;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<Program> resolve_profile(const Scenario& s, const std::vector<std::string>& names) {
  std::vector<Program> out;
  for (const auto& n : names) out.push_back(lookup(s, n));
  if (s.game && out.size() != s.game->player_count()) {
    throw DomainError("profile names " + std::to_string(out.size()) + " programs for " +
                      std::to_string(s.game->player_count()) + " players");
  }
  return out;
}

}  // namespace pgspi
