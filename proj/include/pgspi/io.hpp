#pragma once

// JSON encodings: canonical fingerprint forms, report forms, and parsers for
// game, function-table, program and scenario files.

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "pgspi/functions.hpp"
#include "pgspi/program.hpp"

namespace pgspi {

using Json = nlohmann::ordered_json;

// ---- encoding (fingerprint forms omit names)

Json to_json(const Rational& r);
Json to_json(const PayoffVector& v);
Json to_json(const Outcome& o);
Json to_json(const geom::Polygon& p);
Json to_json(const geom::Region& r);
Json to_json(const RegionSpec& s);
Json to_json(const RenegFunction& r);
Json to_json(const SVRFunction& f);
Json to_json(const BaseProgram& b);
Json to_json(const Program& p);

// Outcome for reports: action labels when pure, else a label -> weight map.
Json outcome_json(const Outcome& o, const Game& game);

// ---- decoding

Json read_json_file(const std::filesystem::path& path);

Rational parse_rational_json(const Json& j);
Game parse_game(const Json& j, FeasibleOptions options = {});
Game load_game(const std::filesystem::path& path, FeasibleOptions options = {});

// Outcome from action labels ["Slot1","Slot2"] or {"weights": {...}} keyed
// by joint labels joined with ",".
Outcome parse_outcome(const Json& j, const Game& game);
geom::Region parse_region(const Json& j, const Game& game);

struct FunctionTable {
  std::map<std::string, RenegPtr> reneg;
  std::map<std::string, SvrPtr> svr;
};

// Definitions may refer to earlier names in counterpart patterns.
FunctionTable parse_function_table(const Json& j, const Game& game);

Program parse_program(const Json& j, const Game& game, const FunctionTable& table,
                      const std::map<std::string, Program>& named = {});

}  // namespace pgspi
