#pragma once

// Scenario files: a game, a function table, named programs, per-player
// program spaces, beliefs and a selection function.
//
//   {
//     "game": "scheduling.json" | {inline game},
//     "feasible": {"pure_only": false, "resolution": 12},
//     "function_table": "table.json" | {inline table},
//     "definitions": {"name": program, ...},
//     "programs": [["name", {"name": ..., program fields}, ...], ...] | "depth1",
//     "beliefs": [[{"profile": ["name"], "prob": "1/2"}, ...], ...],
//     "selection": {"weights": ["1", "1"], "tie_break": "lex"},
//     "tie_preference": true,
//     "profile": ["name", "name"],
//     "reneg": "r",
//     "transform": "identity" | {"reneg": "r"} | {"csr": ["rn1", "rn2"]}
//   }
//
// Paths are relative to the scenario file.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pgspi/equilibrium.hpp"
#include "pgspi/io.hpp"

namespace pgspi {

struct ScenarioFile {
  Scenario scenario;
  std::optional<ProgramTransform> transform;
  std::filesystem::path path;
};

ScenarioFile parse_scenario(const Json& j, const std::filesystem::path& base_dir);
ScenarioFile load_scenario(const std::filesystem::path& path);

// Names resolve through the scenario's named programs.
std::vector<Program> resolve_profile(const Scenario& s, const std::vector<std::string>& names);

// Constants plus single-branch matches on the counterpart's constants, for
// two-player games.
std::vector<Program> depth1_space(const Game& game, std::size_t player);

SelectionFunction parse_selection(const Json& j);
ProgramTransform parse_transform(const Json& j, const Scenario& s);

}  // namespace pgspi
