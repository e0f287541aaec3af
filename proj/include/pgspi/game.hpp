#pragma once

// Finite base games with exact payoffs and the payoff-space geometry derived
// from them: feasible hull, efficient frontier, PMM, PMP.

#include <memory>
#include <string>
#include <vector>

#include "pgspi/geometry.hpp"
#include "pgspi/types.hpp"

namespace pgspi {

struct FeasibleOptions {
  // Restrict the feasible set to pure profiles (no correlated mixing).
  bool pure_only = false;
  // Mixture denominator for the n >= 3 point-set approximation.
  int resolution = 12;
};

class Game {
 public:
  // payoffs[j] is the payoff vector of joint action j in row-major order,
  // the last player's action varying fastest.
  Game(std::vector<std::vector<std::string>> action_names,
       std::vector<PayoffVector> payoffs, FeasibleOptions options = {});

  std::size_t player_count() const { return actions_.size(); }
  const std::vector<std::string>& actions(std::size_t player) const {
    return actions_.at(player);
  }
  std::size_t joint_count() const { return payoffs_.size(); }

  std::size_t action_index(std::size_t player, std::string_view label) const;
  std::size_t encode(const std::vector<std::size_t>& actions) const;
  std::vector<std::size_t> decode(std::size_t joint) const;
  std::size_t joint_index(const std::vector<std::string>& labels) const;
  std::string joint_label(std::size_t joint) const;
  std::string outcome_label(const Outcome& o) const;

  const PayoffVector& pure_payoff(std::size_t joint) const {
    return payoffs_.at(joint);
  }
  const std::vector<PayoffVector>& pure_payoffs() const { return payoffs_; }
  const FeasibleOptions& options() const { return options_; }

  // True when regions are exact polygons (two players, mixing allowed).
  bool exact_geometry() const { return player_count() == 2 && !options_.pure_only; }

  // The feasible set as a region: the hull polygon in exact mode, otherwise a
  // tagged point set.
  const geom::Region& feasible() const { return feasible_; }
  // Hull polygon; only meaningful in exact mode.
  const geom::Polygon& hull() const { return hull_; }

  // Computed once at construction.
  const geom::Region& efficient() const { return efficient_; }
  const PayoffVector& pmm() const { return pmm_; }

 private:
  std::vector<std::vector<std::string>> actions_;
  std::vector<PayoffVector> payoffs_;
  FeasibleOptions options_;
  geom::Polygon hull_;
  geom::Region feasible_;
  geom::Region efficient_;
  PayoffVector pmm_;

  void finish();
};

enum class Dominance { Weak, Strict };

PayoffVector payoff(const Game& game, const Outcome& outcome);

// weak: x_i >= y_i for all i. strict: x_i > y_i for all i.
bool dominates(const PayoffVector& x, const PayoffVector& y,
               Dominance mode = Dominance::Weak);

// Weak dominance with at least one strict coordinate.
bool pareto_improves(const PayoffVector& x, const PayoffVector& y);

geom::Region efficient_outcomes(const Game& game);
PayoffVector pmm(const Game& game);
Rational best_feasible_payoff(const Game& game, std::size_t player);

geom::Region pmp(const Game& game, std::size_t player, const Outcome& outcome);
geom::Region pmp_at(const Game& game, std::size_t player, const PayoffVector& u);

// Smallest payoff vector in the PMP: max(g_k, u_k) per coordinate.
PayoffVector pmp_floor(const Game& game, const PayoffVector& u);

// Feasible region restricted to lower[k] <= x_k <= upper[k] (null bounds are
// open). Works in both geometry modes.
geom::Region feasible_box(const Game& game,
                          const std::vector<std::optional<Rational>>& lower,
                          const std::vector<std::optional<Rational>>& upper);

// An outcome whose payoff is exactly u. Deterministic: the first pure
// profile, pair or triangle (in index order) that realizes u.
// Throws DomainError when u is infeasible.
Outcome realize(const Game& game, const PayoffVector& u);

}  // namespace pgspi
