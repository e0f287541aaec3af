#include "pgspi/io.hpp"

#include <fstream>
#include <sstream>

namespace pgspi {

using geom::Polygon;
using geom::Region;

// ------------------------------------------------------------- encoding

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const PayoffVector& v) {
  Json out = Json::array();
  for (const auto& x : v.values) out.push_back(to_string(x));
  return out;
}

Json to_json(const Outcome& o) {
  Json out = Json::array();
  for (const auto& [j, w] : o.weights()) out.push_back(Json::array({j, to_string(w)}));
  return out;
}

Json to_json(const Polygon& p) {
  Json out = Json::array();
  for (const auto& v : p.vertices()) {
    out.push_back(Json::array({to_string(v.x), to_string(v.y)}));
  }
  return out;
}

Json to_json(const Region& r) {
  if (r.mode() == Region::Mode::Points && !r.empty()) {
    Json pts = Json::array();
    for (const auto& t : r.points()) {
      pts.push_back(Json{{"payoff", to_json(t.payoff)}, {"outcome", to_json(t.outcome)}});
    }
    return Json{{"points", pts}};
  }
  Json out = Json::array();
  for (const auto& p : r.parts()) out.push_back(to_json(p));
  return out;
}

namespace {

Json bound_json(const Bound& b) {
  switch (b.kind) {
    case Bound::Kind::Default:
      return "default";
    case Bound::Kind::Pmp:
      return "pmp";
    case Bound::Kind::Absolute:
      break;
  }
  return to_string(b.value);
}

Json bounds_json(const std::vector<std::vector<Bound>>& bs) {
  Json out = Json::array();
  for (const auto& terms : bs) {
    Json t = Json::array();
    for (const auto& b : terms) t.push_back(bound_json(b));
    out.push_back(t);
  }
  return out;
}

Json pattern_json(const CounterpartPattern& p) {
  if (p.kind == CounterpartPattern::Kind::Any) return "*";
  Json fps = Json::array();
  for (const auto& fp : p.fingerprints) fps.push_back(Json::parse(fp));
  return Json{{p.kind == CounterpartPattern::Kind::Exact ? "exact" : "extension_of", fps}};
}

}  // namespace

Json to_json(const RegionSpec& s) {
  switch (s.kind()) {
    case RegionSpec::Kind::Fixed:
      return Json{{"fixed", to_json(s.region())}};
    case RegionSpec::Kind::Union: {
      Json parts = Json::array();
      for (const auto& p : s.parts()) parts.push_back(to_json(p));
      return Json{{"union", parts}};
    }
    case RegionSpec::Kind::Box:
      break;
  }
  Json guard = Json::array();
  for (const auto& g : s.guard()) guard.push_back(g ? Json(to_string(*g)) : Json(nullptr));
  return Json{{"box", Json{{"lower", bounds_json(s.lower())},
                           {"upper", bounds_json(s.upper())},
                           {"guard", guard}}}};
}

Json to_json(const RenegFunction& r) {
  Json rules = Json::array();
  for (const auto& [from, to] : r.rules()) {
    rules.push_back(Json::array({to_json(from), to_json(to)}));
  }
  return Json{{"type", "reneg"}, {"rules", rules}};
}

Json to_json(const SVRFunction& f) {
  Json lineage = Json::array();
  for (const auto& fp : f.lineage()) lineage.push_back(Json::parse(fp));
  Json rules = Json::array();
  for (const auto& rule : f.rules()) {
    rules.push_back(Json{
        {"counterpart", pattern_json(rule.counterpart)},
        {"default", rule.default_outcome ? to_json(*rule.default_outcome) : Json("*")},
        {"region", to_json(rule.region)}});
  }
  return Json{{"type", "svr"}, {"lineage", lineage}, {"rules", rules}};
}

Json to_json(const BaseProgram& b) {
  Json out{{"kind", "const"}, {"action", b.fallback()}};
  const auto& br = b.branches();
  for (auto it = br.rbegin(); it != br.rend(); ++it) {
    Json m{{"kind", "match"}, {"pattern", Json::parse(it->pattern.fingerprint)}};
    if (it->pattern.on == MatchPattern::On::Default) m["on"] = "default";
    m["then"] = it->action;
    m["else"] = std::move(out);
    out = std::move(m);
  }
  return out;
}

Json to_json(const Program& p) {
  switch (p.kind()) {
    case Program::Kind::Base:
      return to_json(p.default_program());
    case Program::Kind::Reneg:
      return Json{{"kind", "reneg"},
                  {"default", to_json(p.default_program())},
                  {"r", to_json(*p.reneg_function())}};
    case Program::Kind::Csr:
      return Json{{"kind", "csr"},
                  {"default", to_json(p.default_program())},
                  {"rn", to_json(*p.svr())}};
    case Program::Kind::Icsr: {
      Json rounds = Json::array();
      for (const auto& r : p.rounds()) rounds.push_back(to_json(*r));
      return Json{{"kind", "icsr"}, {"default", to_json(p.default_program())},
                  {"rounds", rounds}};
    }
  }
  return nullptr;
}

Json outcome_json(const Outcome& o, const Game& game) {
  if (o.is_pure()) {
    Json labels = Json::array();
    auto acts = game.decode(o.weights()[0].first);
    for (std::size_t i = 0; i < acts.size(); ++i) labels.push_back(game.actions(i)[acts[i]]);
    return labels;
  }
  Json w = Json::object();
  for (const auto& [j, x] : o.weights()) {
    auto acts = game.decode(j);
    std::string key;
    for (std::size_t i = 0; i < acts.size(); ++i) {
      if (i) key += ",";
      key += game.actions(i)[acts[i]];
    }
    w[key] = to_string(x);
  }
  return Json{{"weights", w}};
}

// ------------------------------------------------------------- decoding

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Rational parse_rational_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) {
    return parse_rational(j.dump());
  }
  throw ParseError("expected a rational string or integer, got " + j.dump());
}

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(where + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

std::string str(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string, got " + j.dump());
  return j.get<std::string>();
}

void collect_payoffs(const Json& j, std::size_t depth, std::size_t n,
                     const std::vector<std::vector<std::string>>& players,
                     const std::string& where, std::vector<PayoffVector>& out) {
  if (depth == n) {
    if (!j.is_array() || j.size() != n) {
      throw ParseError(where + ": payoff entry must list " + std::to_string(n) + " values");
    }
    PayoffVector v;
    for (std::size_t i = 0; i < n; ++i) {
      try {
        v.values.push_back(parse_rational_json(j[i]));
      } catch (const ParseError& e) {
        throw ParseError(where + "[" + std::to_string(i) + "]: " + e.what());
      }
    }
    out.push_back(std::move(v));
    return;
  }
  if (!j.is_array() || j.size() != players[depth].size()) {
    throw ParseError(where + ": expected " + std::to_string(players[depth].size()) +
                     " entries for player " + std::to_string(depth + 1));
  }
  for (std::size_t a = 0; a < j.size(); ++a) {
    collect_payoffs(j[a], depth + 1, n, players, where + "[" + std::to_string(a) + "]", out);
  }
}

}  // namespace

Game parse_game(const Json& j, FeasibleOptions options) {
  const Json& pl = field(j, "players", "game");
  if (!pl.is_array()) throw ParseError("game.players: expected a list of action lists");
  std::vector<std::vector<std::string>> players;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    std::vector<std::string> acts;
    if (!pl[i].is_array()) throw ParseError("game.players[" + std::to_string(i) + "]: expected a list");
    for (const auto& a : pl[i]) acts.push_back(str(a, "game.players"));
    players.push_back(std::move(acts));
  }
  std::vector<PayoffVector> payoffs;
  collect_payoffs(field(j, "payoffs", "game"), 0, players.size(), players, "game.payoffs",
                  payoffs);
  return Game(std::move(players), std::move(payoffs), options);
}

Game load_game(const std::filesystem::path& path, FeasibleOptions options) {
  Json j = read_json_file(path);
  try {
    return parse_game(j, options);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Outcome parse_outcome(const Json& j, const Game& game) {
  if (j.is_array()) {
    std::vector<std::string> labels;
    for (const auto& x : j) labels.push_back(str(x, "outcome"));
    return Outcome::pure(game.joint_index(labels));
  }
  if (j.is_object() && j.contains("weights")) {
    std::vector<std::pair<std::size_t, Rational>> ws;
    for (const auto& [key, w] : j.at("weights").items()) {
      std::vector<std::string> labels;
      std::stringstream ss(key);
      std::string part;
      while (std::getline(ss, part, ',')) {
        auto b = part.find_first_not_of(' ');
        labels.push_back(b == std::string::npos ? "" : part.substr(b));
      }
      ws.emplace_back(game.joint_index(labels), parse_rational_json(w));
    }
    return Outcome::mixture(std::move(ws));
  }
  throw ParseError("outcome: expected action labels or {\"weights\": ...}, got " + j.dump());
}

namespace {

geom::Point parse_point(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError("polygon vertex must be a [x, y] pair, got " + j.dump());
  }
  return {parse_rational_json(j[0]), parse_rational_json(j[1])};
}

PayoffVector parse_payoff(const Json& j) {
  if (!j.is_array()) throw ParseError("payoff must be a list, got " + j.dump());
  PayoffVector v;
  for (const auto& x : j) v.values.push_back(parse_rational_json(x));
  return v;
}

Bound parse_bound(const Json& j) {
  if (j == "default") return Bound::at_default();
  if (j == "pmp") return Bound::pmp();
  return Bound::absolute(parse_rational_json(j));
}

std::vector<std::vector<Bound>> parse_bounds(const Json& j, std::size_t n) {
  std::vector<std::vector<Bound>> out(n);
  if (j.is_null()) return out;
  if (!j.is_array() || j.size() != n) {
    throw ParseError("box bounds need one entry per player, got " + j.dump());
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (j[k].is_null()) continue;
    if (j[k].is_array()) {
      for (const auto& t : j[k]) out[k].push_back(parse_bound(t));
    } else {
      out[k].push_back(parse_bound(j[k]));
    }
  }
  return out;
}

RegionSpec parse_region_spec(const Json& j, const Game& game) {
  if (j.is_object() && j.contains("box")) {
    const Json& b = j.at("box");
    const std::size_t n = game.player_count();
    auto lower = parse_bounds(b.value("lower", Json()), n);
    auto upper = parse_bounds(b.value("upper", Json()), n);
    std::vector<std::optional<Rational>> guard(n);
    if (b.contains("guard")) {
      const Json& g = b.at("guard");
      if (!g.is_array() || g.size() != n) throw ParseError("box guard needs one entry per player");
      for (std::size_t k = 0; k < n; ++k) {
        if (!g[k].is_null()) guard[k] = parse_rational_json(g[k]);
      }
    }
    return RegionSpec::box(std::move(lower), std::move(upper), std::move(guard));
  }
  if (j.is_object() && j.contains("union")) {
    std::vector<RegionSpec> parts;
    for (const auto& p : j.at("union")) parts.push_back(parse_region_spec(p, game));
    return RegionSpec::unite(std::move(parts));
  }
  if (j.is_object() && j.contains("fixed")) return RegionSpec::fixed(parse_region(j.at("fixed"), game));
  return RegionSpec::fixed(parse_region(j, game));
}

}  // namespace

Region parse_region(const Json& j, const Game& game) {
  if (j.is_object() && j.contains("points")) {
    std::vector<geom::TaggedPoint> pts;
    for (const auto& p : j.at("points")) {
      if (p.is_object()) {
        PayoffVector u = parse_payoff(field(p, "payoff", "region point"));
        Outcome o = p.contains("outcome") ? parse_outcome(p.at("outcome"), game) : realize(game, u);
        if (!(payoff(game, o) == u)) {
          throw DomainError("region point " + to_string(u) + " is not realized by its outcome");
        }
        pts.push_back({u, o});
      } else {
        PayoffVector u = parse_payoff(p);
        pts.push_back({u, realize(game, u)});
      }
    }
    return Region::from_points(std::move(pts));
  }
  if (!j.is_array()) throw ParseError("region: expected a list of polygons, got " + j.dump());
  if (!j.empty() && !game.exact_geometry()) {
    throw DomainError("polygon regions need a 2-player game with mixing; use {\"points\": ...}");
  }
  std::vector<Polygon> parts;
  for (const auto& poly : j) {
    if (!poly.is_array()) throw ParseError("region polygon must be a vertex list");
    std::vector<geom::Point> pts;
    for (const auto& v : poly) pts.push_back(parse_point(v));
    parts.push_back(Polygon::hull(std::move(pts)));
  }
  return Region::from_polygons(std::move(parts));
}

namespace {

std::vector<std::string> pattern_fps(const Json& j, const FunctionTable& table,
                                     const std::string& where) {
  std::vector<std::string> names;
  if (j.is_string()) {
    names.push_back(j.get<std::string>());
  } else if (j.is_array()) {
    for (const auto& x : j) names.push_back(str(x, where));
  } else {
    throw ParseError(where + ": counterpart pattern must name functions");
  }
  std::vector<std::string> fps;
  for (const auto& name : names) {
    auto it = table.svr.find(name);
    if (it == table.svr.end()) {
      throw ParseError(where + ": counterpart pattern refers to unknown or later function \"" +
                       name + "\"");
    }
    fps.push_back(it->second->fingerprint());
  }
  return fps;
}

CounterpartPattern parse_pattern(const Json& j, const FunctionTable& table,
                                 const std::string& where) {
  CounterpartPattern p;
  if (j.is_null() || j == "*") return p;
  if (j.is_object() && j.contains("exact")) {
    p.kind = CounterpartPattern::Kind::Exact;
    p.fingerprints = pattern_fps(j.at("exact"), table, where);
    return p;
  }
  if (j.is_object() && j.contains("extension_of")) {
    p.kind = CounterpartPattern::Kind::ExtensionOf;
    p.fingerprints = pattern_fps(j.at("extension_of"), table, where);
    return p;
  }
  throw ParseError(where + ": bad counterpart pattern " + j.dump());
}

}  // namespace

FunctionTable parse_function_table(const Json& j, const Game& game) {
  if (!j.is_object()) throw ParseError("function table must be an object of named functions");
  FunctionTable table;
  for (const auto& [name, def] : j.items()) {
    const std::string where = "function \"" + name + "\"";
    if (table.reneg.count(name) || table.svr.count(name)) {
      throw ParseError(where + " defined twice");
    }
    std::string type = str(field(def, "type", where), where + ".type");
    const Json& rules = field(def, "rules", where);
    if (!rules.is_array()) throw ParseError(where + ".rules must be a list");
    if (type == "reneg") {
      std::vector<std::pair<Outcome, Outcome>> rs;
      for (const auto& r : rules) {
        rs.emplace_back(parse_outcome(field(r, "from", where), game),
                        parse_outcome(field(r, "to", where), game));
      }
      table.reneg[name] = std::make_shared<RenegFunction>(name, std::move(rs));
    } else if (type == "svr") {
      std::vector<SvrRule> rs;
      for (const auto& r : rules) {
        SvrRule rule;
        rule.counterpart = parse_pattern(r.value("counterpart", Json("*")), table, where);
        Json d = r.value("default", Json("*"));
        if (!(d == "*")) rule.default_outcome = parse_outcome(d, game);
        rule.region = parse_region_spec(field(r, "region", where), game);
        rs.push_back(std::move(rule));
      }
      table.svr[name] = std::make_shared<SVRFunction>(name, std::move(rs));
    } else {
      throw ParseError(where + ": unknown type \"" + type + "\"");
    }
  }
  return table;
}

Program parse_program(const Json& j, const Game& game, const FunctionTable& table,
                      const std::map<std::string, Program>& named) {
  if (j.is_string()) {
    auto it = named.find(j.get<std::string>());
    if (it == named.end()) throw ParseError("unknown program \"" + j.get<std::string>() + "\"");
    return it->second;
  }
  std::string kind = str(field(j, "kind", "program"), "program.kind");
  auto base_of = [&](const Json& x) {
    Program p = parse_program(x, game, table, named);
    if (p.kind() != Program::Kind::Base) {
      throw ParseError("default programs must be base programs");
    }
    return p.default_program();
  };
  if (kind == "const") {
    std::string action = str(field(j, "action", "const program"), "const.action");
    bool known = false;
    for (std::size_t i = 0; i < game.player_count(); ++i) {
      const auto& acts = game.actions(i);
      known = known || std::find(acts.begin(), acts.end(), action) != acts.end();
    }
    if (!known) throw DomainError("program uses unknown action \"" + action + "\"");
    return Program::base(BaseProgram::constant(action));
  }
  if (kind == "match") {
    MatchPattern pat;
    pat.fingerprint = parse_program(field(j, "pattern", "match program"), game, table, named)
                          .fingerprint();
    if (j.value("on", std::string("program")) == "default") pat.on = MatchPattern::On::Default;
    std::string then = str(field(j, "then", "match program"), "match.then");
    BaseProgram otherwise = base_of(field(j, "else", "match program"));
    return Program::base(BaseProgram::match(pat, then, otherwise));
  }
  auto svr_named = [&](const Json& x) {
    std::string name = str(x, "program function");
    auto it = table.svr.find(name);
    if (it == table.svr.end()) throw ParseError("unknown set-valued function \"" + name + "\"");
    return it->second;
  };
  if (kind == "reneg") {
    std::string name = str(field(j, "r", "reneg program"), "reneg.r");
    auto it = table.reneg.find(name);
    if (it == table.reneg.end()) throw ParseError("unknown renegotiation function \"" + name + "\"");
    return Program::reneg(base_of(field(j, "default", "reneg program")), it->second);
  }
  if (kind == "csr") {
    return Program::csr(base_of(field(j, "default", "csr program")),
                        svr_named(field(j, "rn", "csr program")));
  }
  if (kind == "icsr") {
    std::vector<SvrPtr> rounds;
    for (const auto& r : field(j, "rounds", "icsr program")) rounds.push_back(svr_named(r));
    return Program::icsr(base_of(field(j, "default", "icsr program")), std::move(rounds));
  }
  throw ParseError("unknown program kind \"" + kind + "\"");
}

}  // namespace pgspi
