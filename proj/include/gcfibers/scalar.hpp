#pragma once

// Exact-or-floating scalar used for spectra and GC coordinates.
//
// Integers and ratios parsed from text stay exact (boost::rational over
// int64); anything written with a decimal point or exponent is a double.
// Mixed arithmetic promotes to double.

#include <boost/rational.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace gcf {

using Rational = boost::rational<std::int64_t>;

class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(int v) : value_(Rational(v)) {}                 // NOLINT
  Scalar(std::int64_t v) : value_(Rational(v)) {}        // NOLINT
  Scalar(Rational v) : value_(v) {}                      // NOLINT
  Scalar(double v) : value_(v) {}                        // NOLINT

  static Scalar ratio(std::int64_t num, std::int64_t den) { return Scalar(Rational(num, den)); }

  /// Parses "3", "-7/2" (exact) or "0.25", "1e-3" (double).
  static Scalar parse(std::string_view text);

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& rational() const { return std::get<Rational>(value_); }

  double to_double() const {
    if (is_exact()) {
      const auto& r = rational();
      return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
    }
    return std::get<double>(value_);
  }

  bool is_integer() const { return is_exact() && rational().denominator() == 1; }

  std::string str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(a.rational() + b.rational());
    return Scalar(a.to_double() + b.to_double());
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(a.rational() - b.rational());
    return Scalar(a.to_double() - b.to_double());
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(a.rational() * b.rational());
    return Scalar(a.to_double() * b.to_double());
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) {
      if (b.rational().numerator() == 0) throw std::domain_error("Scalar: division by zero");
      return Scalar(a.rational() / b.rational());
    }
    return Scalar(a.to_double() / b.to_double());
  }
  Scalar operator-() const {
    if (is_exact()) return Scalar(-rational());
    return Scalar(-to_double());
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return a.rational() == b.rational();
    return a.to_double() == b.to_double();
  }
  friend bool operator<(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return a.rational() < b.rational();
    return a.to_double() < b.to_double();
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    if (s.is_exact()) {
      const auto& r = s.rational();
      os << r.numerator();
      if (r.denominator() != 1) os << '/' << r.denominator();
    } else {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << s.to_double();
      os << tmp.str();
    }
    return os;
  }

 private:
  std::variant<Rational, double> value_;
};

inline Scalar Scalar::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty number");

  auto parse_int = [&](std::string_view s) -> std::int64_t {
    s = trim(s);
    std::size_t pos = 0;
    std::string buf(s);
    std::int64_t v = 0;
    try {
      v = std::stoll(buf, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    if (pos != buf.size()) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return v;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Scalar(Rational(num, den));
  }
  if (text.find_first_of(".eEnN") == std::string_view::npos) return Scalar(parse_int(text));

  std::string buf(text);
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(buf, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + buf + "'");
  }
  if (pos != buf.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + buf + "'");
  return Scalar(v);
}

}  // namespace gcf
