#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pgspi {

using Rational = mpq_class;

// Error categories map onto CLI exit codes: DomainError and ParseError are
// input errors, IoError is an I/O failure, InvariantViolation is a bug.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Parses "p/q", "-p/q" or an integer. Throws ParseError on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text: "p" for integers, "p/q" in lowest terms otherwise.
std::string to_string(const Rational& value);

/// Decimal rendering rounded half-up to `digits` places, trailing zeros
/// trimmed. Used only where a plotting-friendly value is wanted.
std::string to_decimal(const Rational& value, int digits = 6);

/// Payoff profile, one exact rational per player.
struct PayoffVector {
  std::vector<Rational> values;

  PayoffVector() = default;
  explicit PayoffVector(std::vector<Rational> v) : values(std::move(v)) {}
  PayoffVector(std::initializer_list<Rational> v) : values(v) {}

  std::size_t size() const { return values.size(); }
  const Rational& operator[](std::size_t i) const { return values[i]; }
  Rational& operator[](std::size_t i) { return values[i]; }

  friend bool operator==(const PayoffVector& a, const PayoffVector& b) {
    return a.values == b.values;
  }
  friend bool operator<(const PayoffVector& a, const PayoffVector& b) {
    return std::lexicographical_compare(a.values.begin(), a.values.end(),
                                        b.values.begin(), b.values.end());
  }
};

std::string to_string(const PayoffVector& v);

/// A correlated distribution over pure joint actions. Joint actions are
/// identified by their row-major index in the game's product space. The
/// weight list is kept sorted by index with strictly positive weights, so
/// two outcomes are equal exactly when they describe the same distribution.
class Outcome {
 public:
  Outcome() = default;

  /// Point mass on a pure joint action.
  static Outcome pure(std::size_t joint_index);

  /// Canonicalizes: merges duplicate indices, drops zero weights, sorts.
  /// Throws DomainError on negative weights or a total other than 1.
  static Outcome mixture(std::vector<std::pair<std::size_t, Rational>> weights);

  const std::vector<std::pair<std::size_t, Rational>>& weights() const {
    return weights_;
  }
  bool is_pure() const { return weights_.size() == 1; }
  bool empty() const { return weights_.empty(); }

  friend bool operator==(const Outcome& a, const Outcome& b) {
    return a.weights_ == b.weights_;
  }
  friend bool operator<(const Outcome& a, const Outcome& b);

 private:
  std::vector<std::pair<std::size_t, Rational>> weights_;
};

}  // namespace pgspi
