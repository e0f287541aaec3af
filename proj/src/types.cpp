#include "pgspi/types.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace pgspi {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  // Trim surrounding whitespace.
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) throw ParseError("empty rational");
  s = s.substr(b, e - b + 1);

  auto slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-' ||
      den[0] == '+') {
    throw ParseError("malformed rational \"" + std::string(text) + "\"");
  }
  if (num[0] == '+') num.erase(0, 1);
  mpz_class n(num, 10);
  mpz_class d(den, 10);
  if (d == 0) {
    throw ParseError("zero denominator in rational \"" + std::string(text) +
                     "\"");
  }
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const Rational& value, int digits) {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rational scaled = value * scale;
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  // Round half up on the magnitude.
  mpz_class q = (scaled.get_num() * 2 + scaled.get_den()) / (scaled.get_den() * 2);
  mpz_class ip = q / scale;
  mpz_class fp = q % scale;
  std::string out = ip.get_str();
  if (fp != 0) {
    std::string frac = fp.get_str();
    frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    out += "." + frac;
  }
  if (negative && q != 0) out.insert(0, "-");
  return out;
}

std::string to_string(const PayoffVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

Outcome Outcome::pure(std::size_t joint_index) {
  Outcome o;
  o.weights_.emplace_back(joint_index, Rational(1));
  return o;
}

Outcome Outcome::mixture(std::vector<std::pair<std::size_t, Rational>> weights) {
  std::map<std::size_t, Rational> merged;
  Rational total = 0;
  for (auto& [idx, w] : weights) {
    if (w < 0) throw DomainError("negative outcome weight " + to_string(w));
    merged[idx] += w;
    total += w;
  }
  if (total != 1) {
    throw DomainError("outcome weights sum to " + to_string(total) +
                      ", expected 1");
  }
  Outcome o;
  for (auto& [idx, w] : merged) {
    if (w != 0) o.weights_.emplace_back(idx, w);
  }
  return o;
}

bool operator<(const Outcome& a, const Outcome& b) {
  return std::lexicographical_compare(
      a.weights_.begin(), a.weights_.end(), b.weights_.begin(),
      b.weights_.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return x.second < y.second;
      });
}

}  // namespace pgspi
