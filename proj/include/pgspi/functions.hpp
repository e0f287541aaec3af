#pragma once

// Renegotiation functions (point-valued), set-valued renegotiation rule
// tables, and selection functions.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgspi/game.hpp"
#include "pgspi/geometry.hpp"

namespace pgspi {

// ------------------------------------------------------------ RegionSpec

// One term of a box template bound, resolved against the default outcome a.
struct Bound {
  enum class Kind {
    Absolute,  // the stored value
    Default,   // u_k(a)
    Pmp,       // max(g_k, u_k(a))
  };
  Kind kind = Kind::Absolute;
  Rational value;

  static Bound absolute(Rational v) { return {Kind::Absolute, std::move(v)}; }
  static Bound at_default() { return {Kind::Default, 0}; }
  static Bound pmp() { return {Kind::Pmp, 0}; }
};

// A region that may depend on the default outcome it is evaluated at.
class RegionSpec {
 public:
  enum class Kind { Fixed, Box, Union };

  RegionSpec() = default;  // fixed empty region
  static RegionSpec fixed(geom::Region r);
  // Box template over the feasible set: for each player k the region keeps
  // points with x_k >= every lower term and x_k <= every upper term. When
  // guard[k] is set the region is empty unless u_k(a) <= guard[k].
  static RegionSpec box(std::vector<std::vector<Bound>> lower,
                        std::vector<std::vector<Bound>> upper,
                        std::vector<std::optional<Rational>> guard = {});
  static RegionSpec unite(std::vector<RegionSpec> parts);

  Kind kind() const { return kind_; }
  const geom::Region& region() const { return region_; }
  const std::vector<std::vector<Bound>>& lower() const { return lower_; }
  const std::vector<std::vector<Bound>>& upper() const { return upper_; }
  const std::vector<std::optional<Rational>>& guard() const { return guard_; }
  const std::vector<RegionSpec>& parts() const { return parts_; }

  geom::Region evaluate(const Game& game, const Outcome& a) const;

  // True when every player has a Default or Pmp lower term, so every point
  // of the evaluated region weakly improves on u(a).
  bool anchored() const;

 private:
  Kind kind_ = Kind::Fixed;
  geom::Region region_;
  std::vector<std::vector<Bound>> lower_;
  std::vector<std::vector<Bound>> upper_;
  std::vector<std::optional<Rational>> guard_;
  std::vector<RegionSpec> parts_;
};

// ------------------------------------------------------- RenegFunction

class RenegFunction {
 public:
  RenegFunction(std::string name, std::vector<std::pair<Outcome, Outcome>> rules);

  const std::string& name() const { return name_; }
  const std::map<Outcome, Outcome>& rules() const { return rules_; }
  // Identity outside the mapped outcomes.
  Outcome apply(const Outcome& a) const;
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::string name_;
  std::map<Outcome, Outcome> rules_;
  std::string fingerprint_;
};

// --------------------------------------------------------- SVRFunction

class SVRFunction;

struct CounterpartPattern {
  enum class Kind {
    Any,
    Exact,        // counterpart function fingerprints equal these
    ExtensionOf,  // equal, or derived from them by extension
  };
  Kind kind = Kind::Any;
  // One fingerprint per counterpart, in player order.
  std::vector<std::string> fingerprints;

  bool matches(const std::vector<const SVRFunction*>& counterparts) const;
};

struct SvrRule {
  CounterpartPattern counterpart;
  std::optional<Outcome> default_outcome;  // nullopt matches any outcome
  RegionSpec region;
};

class SVRFunction {
 public:
  SVRFunction(std::string name, std::vector<SvrRule> rules,
              std::vector<std::string> lineage = {});

  const std::string& name() const { return name_; }
  const std::vector<SvrRule>& rules() const { return rules_; }
  // Fingerprints of the functions this one was extended from, oldest first.
  const std::vector<std::string>& lineage() const { return lineage_; }
  const std::string& fingerprint() const { return fingerprint_; }

  std::optional<std::size_t> matched_rule(
      const std::vector<const SVRFunction*>& counterparts, const Outcome& a) const;

  // RN_i(RN_-i, a); empty when no rule matches.
  geom::Region evaluate(const std::vector<const SVRFunction*>& counterparts,
                        const Outcome& a, const Game& game) const;

 private:
  std::string name_;
  std::vector<SvrRule> rules_;
  std::vector<std::string> lineage_;
  std::string fingerprint_;
};

using SvrPtr = std::shared_ptr<const SVRFunction>;
using RenegPtr = std::shared_ptr<const RenegFunction>;

// ---------------------------------------------------- SelectionFunction

struct Selection {
  PayoffVector payoff;
  Outcome outcome;
};

class SelectionFunction {
 public:
  // Receives every vertex payoff of the region and returns one of them.
  using External = std::function<PayoffVector(const std::vector<PayoffVector>&)>;

  SelectionFunction() : weights_{Rational(1), Rational(1)}, name_("weighted_sum") {}
  static SelectionFunction weighted_sum(std::vector<Rational> weights);
  static SelectionFunction external(std::string name, External fn);

  bool is_weighted_sum() const { return !external_; }
  bool approximate() const { return static_cast<bool>(external_); }
  const std::vector<Rational>& weights() const { return weights_; }
  std::string describe() const;

  // Throws DomainError on an empty region.
  Selection select(const geom::Region& s, const Game& game) const;

 private:
  std::vector<Rational> weights_;
  std::string name_;
  External external_;
};

}  // namespace pgspi
