#pragma once

// Validation of renegotiation functions, transitivity checks for selection
// functions, and the program transforms built on them.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pgspi/functions.hpp"
#include "pgspi/program.hpp"

namespace pgspi {

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
  std::optional<std::string> strict_witness;
  // What the check quantified over.
  std::string universe;
};

ValidationReport validate_reneg(const RenegFunction& r, const Game& game);

// Checks every counterpart in `universe` (an empty universe means a single
// counterpart that no pattern names) at a finite set of default outcomes:
// pure profiles, outcomes named by the rules, and the PMM realization.
ValidationReport validate_svr(const SVRFunction& rn, const Game& game,
                              const std::vector<SvrPtr>& universe);

struct TransitivityReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;  // S' did not dominate D(S)
  std::vector<std::string> counterexamples;
  bool passed() const { return counterexamples.empty(); }
};

// Flags outputs that are not on the frontier of their input and pairs where
// D(S u S') fails to weakly dominate D(S).
TransitivityReport check_transitive(
    const SelectionFunction& d,
    const std::vector<std::pair<geom::Region, geom::Region>>& samples, const Game& game);

// Random pairs (S, S') inside the feasible hull with S' drawn from the part
// of the hull weakly dominating D(S). Exact 2-player games only.
std::vector<std::pair<geom::Region, geom::Region>> transitivity_samples(
    const SelectionFunction& d, const Game& game, std::size_t count, std::uint64_t seed);

struct ProgramTransform {
  std::string name;
  std::function<Program(std::size_t player, const Program&)> apply;
};

ProgramTransform identity_transform();

// p_i -> Reneg(p_i, r). Throws DomainError if r fails validation.
ProgramTransform make_reneg_spi(RenegPtr r, const Game& game);

// p_i -> CSR(p_i, rn_i). Checks that each rn_i covers Y_i(a) at every default
// outcome a reachable from `default_space`; throws DomainError naming the
// failing player and outcome otherwise.
ProgramTransform make_csr_spi(const std::vector<SvrPtr>& rn_profile, const Game& game,
                              const std::vector<std::vector<Program>>& default_space);

// PMP-extension of a CSR program for `player`. Each counterpart profile in
// the universe (the other players' programs, in order) that also uses CSR
// gets a rule at its default outcome accepting Y_i(a(p)) on top of the
// previously matched region. Returns p unchanged when nothing is added.
Program pmp_extend(const Program& p, std::size_t player, const Game& game,
                   const std::vector<std::vector<Program>>& universe,
                   const SelectionFunction& selection);

// Singleton rule tables that force any selection function to the outcome
// `d_old` picks from the original agreement set at each listed default.
std::vector<SvrPtr> translate_selection(const std::vector<SvrPtr>& rn_profile,
                                        const SelectionFunction& d_old, const Game& game,
                                        const std::vector<Outcome>& defaults);

// Agreement set of a rule-table profile at default outcome a.
geom::Region agreement_set(const std::vector<SvrPtr>& rn_profile, const Outcome& a,
                           const Game& game);

}  // namespace pgspi
