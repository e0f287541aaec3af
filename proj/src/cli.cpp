#include "pgspi/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "pgspi/equilibrium.hpp"
#include "pgspi/renegotiation.hpp"
#include "pgspi/scenario.hpp"

namespace pgspi::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string path;
  bool json = false;
  bool all = false;
  std::string out;
  std::size_t k = 3;
  std::string delta = "1/5,1/5";
  std::string profile;
  std::string outcome;
  std::size_t player = 0;  // 1-based, 0 for every player
  std::string transform;
};

struct Result {
  Json report;
  int code = kOk;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto b = part.find_first_not_of(' ');
    auto e = part.find_last_not_of(' ');
    parts.push_back(b == std::string::npos ? "" : part.substr(b, e - b + 1));
  }
  return parts;
}

Json payoff_json(const Game& g, const Outcome& o) {
  return Json{{"outcome", outcome_json(o, g)}, {"payoff", to_json(payoff(g, o))}};
}

Json labels(const Scenario& s, const std::vector<Program>& profile) {
  Json out = Json::array();
  for (const auto& p : profile) out.push_back(s.label(p));
  return out;
}

Json rationals(const std::vector<Rational>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

Json no_punish_json(const NoPunishReport& a) {
  Json v = Json::array();
  for (const auto& x : a.violations) v.push_back(x);
  return Json{{"passed", a.passed}, {"checks", a.checks}, {"universe", a.universe}, {"violations", v}};
}

// Pure outcome with the lexicographically smallest payoff.
Outcome lowest_pure(const Game& g) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < g.joint_count(); ++j) {
    if (g.pure_payoff(j) < g.pure_payoff(best)) best = j;
  }
  return Outcome::pure(best);
}

Outcome outcome_arg(const Options& o, const Game& g) {
  if (o.outcome.empty()) return lowest_pure(g);
  Json labels = Json::array();
  for (const auto& x : split(o.outcome)) labels.push_back(x);
  return parse_outcome(labels, g);
}

std::vector<Program> profile_of(const Options& o, const Scenario& s) {
  if (!o.profile.empty()) return resolve_profile(s, split(o.profile));
  if (!s.profile) throw DomainError("scenario " + s.name + " has no profile; pass --profile");
  return *s.profile;
}

Json run_json(const Scenario& s, const std::vector<Program>& profile) {
  const Game& g = *s.game;
  EvalTrace t;
  Outcome result = evaluate(profile, g, s.selection, &t);
  Json r;
  r["profile"] = labels(s, profile);
  r["family"] = t.family;
  std::vector<PayoffVector> chain;
  if (t.default_outcome) {
    r["default"] = payoff_json(g, *t.default_outcome);
    chain.push_back(payoff(g, *t.default_outcome));
  }
  if (t.family == "reneg") {
    Json props = Json::array();
    for (const auto& p : t.proposals) props.push_back(payoff_json(g, p));
    r["proposals"] = props;
    r["agreed"] = t.agreed;
  }
  if (!t.rounds.empty()) {
    Json rounds = Json::array();
    for (std::size_t k = 0; k < t.rounds.size(); ++k) {
      const RoundTrace& rt = t.rounds[k];
      Json regions = Json::array();
      for (const auto& reg : rt.regions) regions.push_back(to_json(reg));
      Json round{{"round", k + 1}, {"start", payoff_json(g, rt.start)}, {"regions", regions},
                 {"agreement", to_json(rt.agreement)}};
      if (rt.selected) {
        round["selected"] = payoff_json(g, rt.selected->outcome);
        chain.push_back(rt.selected->payoff);
      } else {
        round["selected"] = nullptr;
      }
      rounds.push_back(round);
    }
    r["rounds"] = rounds;
  }
  PayoffVector u = payoff(g, result);
  if (chain.empty() || !(chain.back() == u)) chain.push_back(u);
  r["outcome"] = payoff_json(g, result);
  std::string trace;
  Json cj = Json::array();
  for (std::size_t k = 0; k < chain.size(); ++k) {
    trace += (k ? " -> " : "") + to_string(chain[k]);
    cj.push_back(to_json(chain[k]));
  }
  r["chain"] = cj;
  r["trace"] = trace;
  if (t.family == "base") {
    r["note"] = geom::dominated_in(g.feasible(), u) ? "defaults miscoordinate" : "defaults are efficient";
  } else {
    r["note"] = chain.size() > 1 ? "renegotiated" : "no improvement on the default";
  }
  return r;
}

Json equilibrium_json(const Scenario& s, const EquilibriumReport& rep) {
  const Game& g = *s.game;
  Json players = Json::array();
  for (const auto& p : rep.players) {
    Json utils = Json::array();
    for (const auto& [prog, eu] : p.utilities) {
      utils.push_back(Json{{"program", s.label(prog)}, {"expected_utility", to_string(eu)}});
    }
    Json pj{{"player", p.player + 1},
            {"expected_utility", to_string(p.own)},
            {"best_response", p.best},
            {"argmax", labels(s, p.argmax)}};
    if (p.better) {
      pj["better"] = Json{{"program", s.label(p.better->first)},
                          {"expected_utility", to_string(p.better->second)}};
    }
    pj["utilities"] = utils;
    players.push_back(pj);
  }
  return Json{{"equilibrium", rep.equilibrium}, {"outcome", payoff_json(g, rep.outcome)},
              {"players", players}};
}

Json incentive_json(const Scenario& s, const IncentiveReport& rep) {
  Json cases = Json::array();
  for (const auto& c : rep.cases) {
    cases.push_back(Json{{"equilibrium", labels(s, c.equilibrium)},
                         {"wrapped", labels(s, c.wrapped)},
                         {"eu_before", rationals(c.eu_before)},
                         {"eu_after", rationals(c.eu_after)},
                         {"wrapped_equilibrium", c.wrapped_equilibrium},
                         {"passed", c.passed}});
  }
  return Json{{"passed", rep.passed},
              {"no_punish", no_punish_json(rep.no_punish)},
              {"equilibria", rep.equilibria},
              {"cases", cases}};
}

// ------------------------------------------------------------- commands

Json header(const char* command, const std::string& subject) {
  Json r;
  r["command"] = command;
  r["subject"] = subject;
  return r;
}

Result cmd_pmm(const Options& o) {
  Game g = load_game(o.path);
  Json r = header("pmm", fs::path(o.path).stem().string());
  r["players"] = g.player_count();
  r["pmm"] = to_json(g.pmm());
  Json best = Json::array();
  for (std::size_t i = 0; i < g.player_count(); ++i) best.push_back(to_string(best_feasible_payoff(g, i)));
  r["best_feasible"] = best;
  r["efficient"] = to_json(g.efficient());
  std::set<PayoffVector> verts;
  for (const auto& v : g.efficient().vertex_payoffs()) verts.insert(v);
  Json vj = Json::array();
  for (const auto& v : verts) vj.push_back(to_json(v));
  r["frontier_vertices"] = vj;
  Json pure = Json::array();
  for (std::size_t j = 0; j < g.joint_count(); ++j) pure.push_back(payoff_json(g, Outcome::pure(j)));
  r["pure"] = pure;
  return {r, kOk};
}

Result cmd_pmp(const Options& o) {
  Game g = load_game(o.path);
  Outcome a = outcome_arg(o, g);
  if (o.player > g.player_count()) throw DomainError("--player is out of range");
  Json r = header("pmp", fs::path(o.path).stem().string());
  r["reference"] = payoff_json(g, a);
  r["pmm"] = to_json(g.pmm());
  r["floor"] = to_json(pmp_floor(g, payoff(g, a)));
  Json parts = Json::array();
  for (std::size_t i = 0; i < g.player_count(); ++i) {
    if (o.player && o.player != i + 1) continue;
    parts.push_back(Json{{"player", i + 1}, {"region", to_json(pmp(g, i, a))}});
  }
  r["pmp"] = parts;
  return {r, kOk};
}

Result cmd_run(const Options& o) {
  ScenarioFile f = load_scenario(o.path);
  const Scenario& s = f.scenario;
  Json r = header("run", s.name);
  r["selection"] = s.selection.describe();
  r.update(run_json(s, profile_of(o, s)));
  return {r, kOk};
}

Result cmd_equilibrium(const Options& o) {
  ScenarioFile f = load_scenario(o.path);
  const Scenario& s = f.scenario;
  auto profile = profile_of(o, s);
  Json r = header("equilibrium", s.name);
  r["profile"] = labels(s, profile);
  auto rep = check_subjective_equilibrium(profile, s);
  r.update(equilibrium_json(s, rep));
  bool ok = rep.equilibrium;
  if (s.reneg) {
    auto inc = check_renegotiation_incentive(s, s.reneg);
    r["renegotiation_incentive"] = incentive_json(s, inc);
    ok = ok && inc.passed;
  }
  r["passed"] = ok;
  return {r, ok ? kOk : kFailed};
}

Result cmd_verify_spi(const Options& o) {
  ScenarioFile f = load_scenario(o.path);
  const Scenario& s = f.scenario;
  const Game& g = *s.game;
  ProgramTransform t = o.transform.empty()
                           ? (f.transform ? *f.transform : throw DomainError("scenario " + s.name +
                                                                             " has no transform; pass --transform"))
                           : parse_transform(o.transform == "identity" ? Json("identity")
                                                                       : Json::parse(o.transform, nullptr, false),
                                             s);
  Json r = header("verify-spi", s.name);
  r["transform"] = t.name;
  auto rep = verify_spi(t, s.space, g, s.selection);
  r["universe"] = rep.universe;
  r["profiles"] = rep.profiles;
  r["passed"] = rep.passed;
  if (rep.strict_witness) {
    r["strict_witness"] = Json{{"profile", labels(s, *rep.strict_witness)},
                               {"before", to_json(rep.before)},
                               {"after", to_json(rep.after)}};
  } else {
    r["strict_witness"] = nullptr;
  }
  if (rep.violation) {
    r["violation"] = Json{{"profile", labels(s, *rep.violation)},
                          {"before", to_json(rep.before)},
                          {"after", to_json(rep.after)}};
  } else {
    r["violation"] = nullptr;
  }
  bool ok = rep.passed;
  if (t.name.rfind("csr:", 0) == 0) {
    // every default pair ends at or above max(own default payoff, pmm)
    std::size_t checked = 0;
    Json failures = Json::array();
    for_each_profile(s.space, [&](const std::vector<Program>& p) {
      std::vector<Program> fp;
      for (std::size_t i = 0; i < p.size(); ++i) fp.push_back(t.apply(i, p[i]));
      PayoffVector before = payoff(g, evaluate(p, g, s.selection));
      PayoffVector after = payoff(g, evaluate(fp, g, s.selection));
      ++checked;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (after[i] < std::max(before[i], g.pmm()[i]) && failures.size() < 5) {
          failures.push_back(Json{{"profile", labels(s, p)}, {"player", i + 1},
                                  {"before", to_json(before)}, {"after", to_json(after)}});
        }
      }
    });
    r["pmm_floor"] = Json{{"passed", failures.empty()}, {"checked", checked}, {"failures", failures}};
    ok = ok && failures.empty();
  }
  return {r, ok ? kOk : kFailed};
}

Result cmd_theorem3(const Options& o) {
  ScenarioFile f = load_scenario(o.path);
  const Scenario& s = f.scenario;
  auto profile = profile_of(o, s);
  Json r = header("theorem3", s.name);
  r["profile"] = labels(s, profile);
  r["pmm"] = to_json(s.game->pmm());
  ExtensionReport rep;
  try {
    rep = theorem3_extend_and_verify(profile, s);
  } catch (const DomainError& e) {
    std::string msg = e.what();
    if (msg.rfind("precondition failed", 0) != 0) throw;
    r["passed"] = false;
    r["precondition"] = msg;
    return {r, kFailed};
  }
  r["transitivity"] = rep.transitivity;
  r["extended"] = labels(s, rep.extended);
  r["eu_before"] = rationals(rep.eu_before);
  r["eu_after"] = rationals(rep.eu_after);
  r["payoff_before"] = to_json(rep.payoff_before);
  r["payoff_after"] = to_json(rep.payoff_after);
  r["equilibrium_before"] = rep.equilibrium_before;
  r["equilibrium_after"] = rep.equilibrium_after;
  r["eu_never_lower"] = rep.eu_never_lower;
  r["equilibrium_kept"] = rep.equilibrium_kept;
  r["above_pmm"] = rep.above_pmm;
  r["passed"] = rep.passed;
  return {r, rep.passed ? kOk : kFailed};
}

Result cmd_tightness(const Options& o) {
  auto g = std::make_shared<const Game>(load_game(o.path));
  PayoffVector delta;
  for (const auto& x : split(o.delta)) delta.values.push_back(parse_rational(x));
  auto built = build_tightness_scenario(g, o.k, delta);
  const TightnessReport& t = built.report;
  const Scenario& s = built.scenario;
  Json r = header("tightness", fs::path(o.path).stem().string());
  r["k"] = t.k;
  r["delta"] = to_json(t.delta);
  r["pmm"] = to_json(t.pmm);
  r["bound"] = to_json(PayoffVector{t.pmm[0] + t.delta[0], t.pmm[1] + t.delta[1]});
  r["best"] = to_json(t.best);
  r["epsilon"] = to_json(t.epsilon);
  r["threshold"] = to_json(t.threshold);
  r["belief_mix_weight"] = to_json(t.belief_mix_weight);
  Json chain = Json::array();
  for (const auto& c : t.chain) chain.push_back(to_json(c));
  r["chain"] = chain;
  r["equilibrium"] = t.equilibrium;
  r["strictly_increasing"] = t.strictly_increasing;
  r["within_bound"] = t.within_bound;
  r["csr_no_punish"] = no_punish_json(t.no_punish_report);
  r["passed"] = t.passed();
  r["run"] = run_json(s, *s.profile);
  r["players"] = equilibrium_json(s, t.equilibrium_report).at("players");
  return {r, t.passed() ? kOk : kFailed};
}

Result cmd_translate(const Options& o) {
  ScenarioFile f = load_scenario(o.path);
  const Scenario& s = f.scenario;
  const Game& g = *s.game;
  auto profile = profile_of(o, s);
  std::vector<SvrPtr> rn;
  for (const auto& p : profile) {
    if (p.kind() != Program::Kind::Csr) {
      throw DomainError("translate-selection needs a CSR profile, got " + s.label(p));
    }
    rn.push_back(p.svr());
  }
  std::vector<Outcome> defaults;
  for (std::size_t j = 0; j < g.joint_count(); ++j) defaults.push_back(Outcome::pure(j));
  auto translated = translate_selection(rn, s.selection, g, defaults);

  std::vector<SelectionFunction> panel{s.selection};
  for (auto w : {std::vector<Rational>{Rational(2), Rational(1)}, std::vector<Rational>{Rational(1), Rational(3)},
                 std::vector<Rational>{Rational(1), Rational(1)}}) {
    if (w.size() != g.player_count()) continue;
    auto d = SelectionFunction::weighted_sum(w);
    bool dup = std::any_of(panel.begin(), panel.end(),
                           [&](const SelectionFunction& x) { return x.describe() == d.describe(); });
    if (!dup) panel.push_back(d);
  }
  Json r = header("translate-selection", s.name);
  r["profile"] = labels(s, profile);
  r["original_selection"] = s.selection.describe();
  Json sels = Json::array();
  for (const auto& d : panel) sels.push_back(d.describe());
  r["selections"] = sels;
  Json cells = Json::array();
  bool same = true;
  for (const auto& a : defaults) {
    auto acts = g.decode(a.weights()[0].first);
    std::vector<Program> before, after;
    for (std::size_t i = 0; i < rn.size(); ++i) {
      auto def = BaseProgram::constant(g.actions(i)[acts[i]]);
      before.push_back(Program::csr(def, rn[i]));
      after.push_back(Program::csr(def, translated[i]));
    }
    Outcome base = evaluate(before, g, s.selection);
    Json row = Json::array();
    bool row_same = true;
    for (const auto& d : panel) {
      Outcome x = evaluate(after, g, d);
      row_same = row_same && x == base;
      row.push_back(to_json(payoff(g, x)));
    }
    same = same && row_same;
    cells.push_back(Json{{"default", outcome_json(a, g)}, {"original", payoff_json(g, base)},
                         {"translated", row}, {"same", row_same}});
  }
  r["cells"] = cells;
  r["passed"] = same;
  return {r, same ? kOk : kFailed};
}

Result cmd_export(const Options& o) {
  Game g = load_game(o.path);
  if (g.player_count() != 2) throw DomainError("export-frontier needs a two-player game");
  Outcome a = outcome_arg(o, g);
  struct Row {
    PayoffVector u;
    std::string tag;
  };
  std::vector<Row> rows;
  auto add_all = [&](std::vector<PayoffVector> vs, const std::string& tag) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    for (auto& v : vs) rows.push_back({v, tag});
  };
  add_all(g.pure_payoffs(), "pure");
  add_all(g.efficient().vertex_payoffs(), "frontier");
  add_all({g.pmm()}, "pmm");
  add_all(pmp(g, 0, a).vertex_payoffs(), "pmp1");
  add_all(pmp(g, 1, a).vertex_payoffs(), "pmp2");

  std::ostringstream csv;
  csv << "u1,u2,tag,u1_exact,u2_exact\n";
  for (const auto& row : rows) {
    csv << to_decimal(row.u[0]) << ',' << to_decimal(row.u[1]) << ',' << row.tag << ','
        << to_string(row.u[0]) << ',' << to_string(row.u[1]) << '\n';
  }
  Json r = header("export-frontier", fs::path(o.path).stem().string());
  r["reference"] = payoff_json(g, a);
  r["rows"] = rows.size();
  if (o.out.empty()) {
    r["csv"] = csv.str();
  } else {
    std::ofstream file(o.out);
    if (!file) throw IoError("cannot write " + o.out);
    file << csv.str();
    file.close();
    if (!file) throw IoError("cannot write " + o.out);
    r["out"] = o.out;
  }
  return {r, kOk};
}

// ------------------------------------------------------------- driver

int code_of(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kIo;
  if (dynamic_cast<const InvariantViolation*>(&e)) return kFailed;
  return kInput;
}

void emit(const Json& report, const Options& o, std::ostream& out) {
  if (o.json) {
    out << report.dump(2) << '\n';
  } else if (report.contains("csv") && report.size() <= 5) {
    out << report.at("csv").get<std::string>();
  } else {
    out << render_text(report);
  }
}

// Game files have "players"; scenario files have "game".
bool batch_candidate(const fs::path& p, bool wants_game) {
  try {
    Json j = read_json_file(p);
    return j.is_object() && j.contains(wants_game ? "players" : "game");
  } catch (const std::exception&) {
    return false;
  }
}

int dispatch(const std::function<Result(const Options&)>& cmd, const std::string& name,
             bool game_input, Options o, std::ostream& out, std::ostream& err) {
  if (!o.all) {
    try {
      Result r = cmd(o);
      emit(r.report, o, out);
      return r.code;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return code_of(e);
    }
  }
  std::error_code ec;
  if (!fs::is_directory(o.path, ec)) {
    err << "error: --all needs a directory, got " << o.path << '\n';
    return kIo;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.path)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Json results = Json::array();
  Json skipped = Json::array();
  int worst = kOk;
  for (const auto& file : files) {
    if (!batch_candidate(file, game_input)) {
      skipped.push_back(file.filename().string());
      continue;
    }
    Options one = o;
    one.path = file.string();
    one.all = false;
    Json entry{{"file", file.filename().string()}};
    try {
      Result r = cmd(one);
      entry["exit"] = r.code;
      entry["report"] = r.report;
      worst = std::max(worst, r.code);
    } catch (const std::exception& e) {
      entry["exit"] = code_of(e);
      entry["error"] = e.what();
      worst = std::max(worst, code_of(e));
    }
    results.push_back(entry);
  }
  Json batch{{"command", name}, {"directory", fs::path(o.path).filename().string()},
             {"results", results}, {"skipped", skipped}};
  emit(batch, o, out);
  return worst;
}

// ------------------------------------------------------------- text

bool scalar(const Json& j) { return !j.is_structured(); }

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "none";
  return j.dump();
}

// Arrays of scalars print as tuples, arrays of those as space-separated
// tuples, one level further as polygons in brackets.
bool inline_text(const Json& j, int depth, std::string& s) {
  if (scalar(j)) {
    s = scalar_text(j);
    return true;
  }
  if (!j.is_array() || depth > 2) return false;
  if (j.empty()) {
    s = "[]";
    return true;
  }
  bool flat = std::all_of(j.begin(), j.end(), scalar);
  std::string parts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string part;
    if (!inline_text(j[i], depth + 1, part)) return false;
    parts += (i ? (flat ? ", " : " ") : "") + part;
  }
  if (flat) {
    s = "(" + parts + ")";
  } else {
    s = "[" + parts + "]";
  }
  return s.size() <= 160;
}

void text_into(const Json& j, int indent, std::ostringstream& out) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    for (const auto& [key, v] : j.items()) {
      std::string s;
      if (inline_text(v, 0, s)) {
        if (v.is_string() && s.find('\n') != std::string::npos) {
          out << pad << key << ":\n" << s;
        } else {
          out << pad << key << ": " << s << '\n';
        }
      } else if (v.empty()) {
        out << pad << key << ": " << (v.is_array() ? "[]" : "{}") << '\n';
      } else {
        out << pad << key << ":\n";
        text_into(v, indent + 2, out);
      }
    }
    return;
  }
  if (j.is_array()) {
    for (const auto& v : j) {
      std::string s;
      if (inline_text(v, 0, s)) {
        out << pad << "- " << s << '\n';
      } else if (v.is_object() && !v.empty()) {
        // first key shares the dash line
        std::ostringstream item;
        text_into(v, indent + 2, item);
        std::string text = item.str();
        out << pad << "- " << text.substr(indent + 2);
      } else {
        out << pad << "-\n";
        text_into(v, indent + 2, out);
      }
    }
    return;
  }
  out << pad << scalar_text(j) << '\n';
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream out;
  text_into(report, 0, out);
  return out.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Safe Pareto improvements for program games: reports and checks"};
  app.name("pgspi");
  app.require_subcommand(1);
  Options o;

  struct Spec {
    const char* name;
    const char* help;
    const char* path_help;
    bool game_input;
    std::function<Result(const Options&)> fn;
  };
  std::vector<Spec> specs{
      {"pmm", "PMM, efficient frontier and best feasible payoffs of a game", "GAME", true, cmd_pmm},
      {"pmp", "Pareto meet projections of a reference outcome", "GAME", true, cmd_pmp},
      {"run", "evaluate a scenario's profile with a renegotiation trace", "SCENARIO", false, cmd_run},
      {"verify-spi", "exhaustive safe Pareto improvement check of a transform", "SCENARIO", false,
       cmd_verify_spi},
      {"equilibrium", "subjective equilibrium check of a profile", "SCENARIO", false, cmd_equilibrium},
      {"theorem3", "PMP-extension of a CSR profile and the PMM guarantee", "SCENARIO", false, cmd_theorem3},
      {"tightness", "build and check the iterated tightness construction", "GAME", true, cmd_tightness},
      {"translate-selection", "rewrite rule tables so any selection gives the same outcomes", "SCENARIO",
       false, cmd_translate},
      {"export-frontier", "CSV of pure payoffs, frontier, PMM and PMP vertices", "GAME", true, cmd_export},
  };
  std::map<CLI::App*, const Spec*> by_app;
  for (const auto& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("path", o.path, spec.path_help)->required();
    sub->add_flag("--json", o.json, "print the JSON report");
    sub->add_flag("--all", o.all, "treat the path as a directory and process every matching file");
    const std::string n = spec.name;
    if (n == "run" || n == "equilibrium" || n == "theorem3" || n == "translate-selection") {
      sub->add_option("--profile", o.profile, "comma-separated program names");
    }
    if (n == "pmp" || n == "export-frontier") {
      sub->add_option("--outcome", o.outcome, "reference outcome as action labels, e.g. Slot1,Slot2");
    }
    if (n == "pmp") sub->add_option("--player", o.player, "only this player (1-based)");
    if (n == "export-frontier") sub->add_option("--out", o.out, "CSV path (stdout when absent)");
    if (n == "verify-spi") {
      sub->add_option("--transform", o.transform,
                      "identity, {\"reneg\": name} or {\"csr\": [names]}; defaults to the scenario's");
    }
    if (n == "tightness") {
      sub->add_option("--k", o.k, "number of rounds")->check(CLI::PositiveNumber);
      sub->add_option("--delta", o.delta, "slack above the PMM, p/q,p/q");
    }
    by_app[sub] = &spec;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInput;
  }
  for (const auto& [sub, spec] : by_app) {
    if (sub->parsed()) return dispatch(spec->fn, spec->name, spec->game_input, o, out, err);
  }
  return kInput;
}

}  // namespace pgspi::cli
