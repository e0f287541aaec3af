#pragma once

// Closed program AST and its evaluator.
//
// Base programs read counterpart fingerprints through a bounded MatchElse
// chain and never call back into the counterpart, so evaluation always
// halts. Renegotiating programs wrap a base default.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pgspi/functions.hpp"

namespace pgspi {

struct MatchPattern {
  enum class On {
    Program,  // counterpart fingerprint equals the pattern
    Default,  // counterpart's default program fingerprint equals the pattern
  };
  On on = On::Program;
  std::string fingerprint;
};

struct MatchBranch {
  MatchPattern pattern;
  std::string action;
};

class BaseProgram {
 public:
  static BaseProgram constant(std::string action);
  // if pattern matches then `action` else `otherwise`.
  static BaseProgram match(MatchPattern pattern, std::string action,
                           const BaseProgram& otherwise);

  const std::vector<MatchBranch>& branches() const { return branches_; }
  const std::string& fallback() const { return fallback_; }
  std::size_t chain_length() const { return branches_.size(); }

  // counterpart_fp: fingerprint of the counterpart (profile); default_fp: the
  // same with each counterpart replaced by its default.
  const std::string& play(const std::string& counterpart_fp,
                          const std::string& default_fp) const;

 private:
  std::vector<MatchBranch> branches_;
  std::string fallback_;
};

class Program {
 public:
  enum class Kind { Base, Reneg, Csr, Icsr };

  static Program base(BaseProgram b);
  static Program reneg(BaseProgram def, RenegPtr r);
  static Program csr(BaseProgram def, SvrPtr rn);
  // Throws DomainError for an empty round list.
  static Program icsr(BaseProgram def, std::vector<SvrPtr> rounds);

  Kind kind() const { return d_->kind; }
  bool renegotiates() const { return d_->kind != Kind::Base; }
  const BaseProgram& default_program() const { return d_->def; }
  const RenegPtr& reneg_function() const { return d_->r; }
  // CSR function, or the first round of an ICSR program.
  const SvrPtr& svr() const { return d_->rounds.front(); }
  const std::vector<SvrPtr>& rounds() const { return d_->rounds; }

  const std::string& fingerprint() const { return d_->fingerprint; }
  const std::string& default_fingerprint() const { return d_->default_fingerprint; }

  friend bool operator==(const Program& a, const Program& b) {
    return a.fingerprint() == b.fingerprint();
  }

 private:
  struct Data {
    Kind kind = Kind::Base;
    BaseProgram def;
    RenegPtr r;
    std::vector<SvrPtr> rounds;
    std::string fingerprint;
    std::string default_fingerprint;
  };
  std::shared_ptr<const Data> d_;

  static Program finish(Data d);
};

const char* kind_name(Program::Kind k);

// Fingerprint of a base program viewed as a whole program.
std::string fingerprint(const BaseProgram& b);

struct Membership {
  Program::Kind kind = Program::Kind::Base;
  std::string default_fingerprint;
  std::vector<std::string> function_fingerprints;  // r, rn, or the K rounds
  std::size_t rounds = 0;
};

Membership classify(const Program& p);

struct EvalOptions {
  std::size_t max_chain = 16;
};

// Raised when a program exceeds the evaluator's structural limits.
class EvaluationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RoundTrace {
  Outcome start;
  std::vector<geom::Region> regions;  // per player
  geom::Region agreement;
  std::optional<Selection> selected;
};

struct EvalTrace {
  // base, reneg, csr, icsr, or mixed
  std::string family;
  std::optional<Outcome> default_outcome;
  std::vector<Outcome> proposals;  // renegotiation targets, reneg family
  bool agreed = false;
  std::vector<RoundTrace> rounds;
  Outcome result;
};

Outcome evaluate(std::span<const Program> profile, const Game& game,
                 const SelectionFunction& selection, EvalTrace* trace = nullptr,
                 const EvalOptions& options = {});

// Outcome of the profile of default programs.
Outcome default_outcome(std::span<const Program> profile, const Game& game,
                        const EvalOptions& options = {});

// Profile with `p` placed at `player` among the counterparts.
std::vector<Program> with_player(const std::vector<Program>& counterparts,
                                 std::size_t player, const Program& p);

// Calls fn on every profile of the product of the per-player spaces.
void for_each_profile(const std::vector<std::vector<Program>>& space,
                      const std::function<void(const std::vector<Program>&)>& fn);

}  // namespace pgspi
