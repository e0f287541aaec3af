#pragma once

// Beliefs, expected utility, subjective equilibrium, SPI verification, the
// no-punishment checks and the constructive checks built on them.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgspi/functions.hpp"
#include "pgspi/io.hpp"
#include "pgspi/program.hpp"
#include "pgspi/renegotiation.hpp"

namespace pgspi {

// One support point: the other players' programs, in player order.
struct BeliefEntry {
  std::vector<Program> counterparts;
  Rational prob;
};

using Belief = std::vector<BeliefEntry>;

// Throws DomainError unless probabilities are positive and sum to exactly 1
// and every entry has `players - 1` counterparts.
void validate_belief(const Belief& b, std::size_t players);

struct Scenario {
  std::string name;
  std::shared_ptr<const Game> game;
  FunctionTable functions;
  // Program names, for reports. Several names may share a fingerprint.
  std::map<std::string, Program> named;
  std::vector<std::vector<Program>> space;  // per player
  std::vector<Belief> beliefs;              // per player
  SelectionFunction selection;
  bool tie_preference = true;
  std::optional<std::vector<Program>> profile;  // the profile commands act on
  RenegPtr reneg;                               // renegotiation function for wraps

  // Name for reports: the first registered name with this fingerprint, else
  // a description built from the program's structure.
  std::string label(const Program& p) const;
  std::string label(const std::vector<Program>& profile) const;
};

Rational expected_payoff(const Program& p, std::size_t player, const Belief& belief,
                         const Game& game, const SelectionFunction& selection);

// Exact argmax set. With tie_preference the set is ordered renegotiating
// programs first, then by how many tied CSR regions a program's region
// strictly contains at the support, then by fingerprint; otherwise by
// fingerprint alone.
std::vector<Program> best_response(const std::vector<Program>& space, std::size_t player,
                                   const Belief& belief, const Game& game,
                                   const SelectionFunction& selection, bool tie_preference);

struct PlayerReport {
  std::size_t player = 0;
  std::vector<std::pair<Program, Rational>> utilities;  // candidates in space order
  std::vector<Program> argmax;
  Rational own;
  bool best = false;
  // Top-ranked argmax member when `best` is false.
  std::optional<std::pair<Program, Rational>> better;
};

struct EquilibriumReport {
  bool equilibrium = true;
  std::vector<PlayerReport> players;
  Outcome outcome;
  PayoffVector payoff;
};

// Each profile component is added to its player's space if missing.
EquilibriumReport check_subjective_equilibrium(const std::vector<Program>& profile,
                                               const Scenario& scenario);

struct SpiReport {
  bool passed = false;
  std::size_t profiles = 0;
  std::optional<std::vector<Program>> strict_witness;
  std::optional<std::vector<Program>> violation;
  PayoffVector before;  // payoffs at the witness or violation
  PayoffVector after;
  std::string universe;
};

SpiReport verify_spi(const ProgramTransform& f, const std::vector<std::vector<Program>>& space,
                     const Game& game, const SelectionFunction& selection);

struct NoPunishReport {
  bool passed = true;
  std::size_t checks = 0;
  std::vector<std::string> violations;
  std::string universe;
};

// No punishment of renegotiation. Reneg programs are those in the spaces,
// supports and candidates, plus wraps of candidate components with `r` when
// given. Clause 1: a support profile that does not renegotiate with a Reneg
// program p_i acts the same against p_i and against its default. Clause 2:
// a candidate's default acts the same against a Reneg support program and
// against that program's default.
NoPunishReport check_reneg_no_punish(const Scenario& scenario,
                                       const std::vector<std::vector<Program>>& candidates,
                                       RenegPtr r = nullptr);

// No punishment of CSR or of PMP-extension. Clause (i): non-CSR candidate
// and support programs act the same against CSR programs and their
// defaults. Clause (ii): support CSR tables respond to a candidate's
// PMP-extension with their old region plus at most part of its PMP.
NoPunishReport check_csr_no_punish(const Scenario& scenario,
                                     const std::vector<std::vector<Program>>& candidates);

// The PMP-extension of each CSR component against the player's support and
// the rest of the profile.
std::vector<Program> pmp_extend_profile(const std::vector<Program>& profile,
                                        const Scenario& scenario);

struct ExtensionReport {
  bool passed = false;
  std::string transitivity;  // how the selection's transitivity was established
  std::vector<Program> extended;
  std::vector<Rational> eu_before, eu_after;
  bool equilibrium_before = false;
  bool equilibrium_after = false;
  PayoffVector payoff_before, payoff_after;
  bool eu_never_lower = false;
  bool equilibrium_kept = false;
  bool above_pmm = false;
};

// Throws DomainError naming the failed precondition when the CSR
// no-punishment check or the transitivity check fails.
ExtensionReport theorem3_extend_and_verify(const std::vector<Program>& profile,
                                           const Scenario& scenario);

struct IncentiveCase {
  std::vector<Program> equilibrium;
  std::vector<Program> wrapped;
  std::vector<Rational> eu_before, eu_after;
  bool wrapped_equilibrium = false;
  bool passed = false;
};

struct IncentiveReport {
  bool passed = false;
  NoPunishReport no_punish;
  std::vector<IncentiveCase> cases;  // every equilibrium with a non-Reneg component
  std::size_t equilibria = 0;
};

// Enumerates every subjective equilibrium of the scenario (the product of
// the per-player argmax sets), wraps non-Reneg components with r and checks
// the wrapped profile.
IncentiveReport check_renegotiation_incentive(const Scenario& scenario, RenegPtr r);

// Lower bound used to tune the belief weight in the tightness construction.
struct TightnessReport {
  std::vector<std::string> hypothesis_failures;
  std::size_t k = 0;
  PayoffVector delta;
  PayoffVector pmm;
  PayoffVector best;       // u*_i
  PayoffVector epsilon;    // concession gap of the y type, per player
  PayoffVector threshold;  // largest admissible belief_mix_weight, per player
  PayoffVector belief_mix_weight;
  std::vector<PayoffVector> chain;  // default then one payoff per round
  bool equilibrium = false;
  bool strictly_increasing = false;
  bool within_bound = false;  // final payoff <= pmm + delta
  bool no_punish_ok = false;
  EquilibriumReport equilibrium_report;
  NoPunishReport no_punish_report;
  bool passed() const {
    return equilibrium && strictly_increasing && within_bound && no_punish_ok;
  }
};

struct TightnessResult {
  Scenario scenario;
  TightnessReport report;
};

// Throws DomainError naming the failed hypothesis.
TightnessResult build_tightness_scenario(std::shared_ptr<const Game> game, std::size_t k,
                                         const PayoffVector& delta);

}  // namespace pgspi
