#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rtlha {

/// Raised for malformed model content: bad rationals, unknown variables,
/// violated invariants of loaded or constructed models.
class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Exact arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
class Rat {
public:
  using Integer = boost::multiprecision::cpp_int;

  Rat() = default;
  Rat(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rat(const Integer& num, const Integer& den) {
    if (den == 0) throw ModelError("rational with zero denominator");
    value_ = Value(num, den);
  }

  /// Parses `p`, `-p` or `p/q` with q > 0. Non-reduced input is accepted and
  /// normalized.
  static Rat parse(std::string_view text) {
    auto fail = [&] { throw ModelError("malformed rational '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    auto slash = text.find('/');
    auto num_text = text.substr(0, slash);
    auto digits_ok = [](std::string_view s, bool allow_sign) {
      if (allow_sign && !s.empty() && s.front() == '-') s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    if (!digits_ok(num_text, true)) fail();
    Integer num{std::string(num_text)};
    if (slash == std::string_view::npos) return Rat(num, 1);
    auto den_text = text.substr(slash + 1);
    if (!digits_ok(den_text, false)) fail();
    Integer den{std::string(den_text)};
    if (den == 0) fail();
    return Rat(num, den);
  }

  Integer numerator() const { return boost::multiprecision::numerator(value_); }
  Integer denominator() const { return boost::multiprecision::denominator(value_); }

  std::string str() const {
    auto den = denominator();
    if (den == 1) return numerator().str();
    return numerator().str() + "/" + den.str();
  }

  bool is_zero() const { return value_ == 0; }
  int sign() const { return value_.sign(); }

  Rat operator-() const { return Rat(-value_); }
  Rat& operator+=(const Rat& o) { value_ += o.value_; return *this; }
  Rat& operator-=(const Rat& o) { value_ -= o.value_; return *this; }
  Rat& operator*=(const Rat& o) { value_ *= o.value_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw ModelError("division by zero");
    value_ /= o.value_;
    return *this;
  }
  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
  using Value = boost::multiprecision::cpp_rational;
  explicit Rat(Value v) : value_(std::move(v)) {}
  Value value_{0};
};

inline Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// Saturating subtraction on nonnegative quantities.
inline Rat monus(const Rat& a, const Rat& b) { return a >= b ? a - b : Rat(0); }

/// Nonnegative rational duration or instant.
class Time {
public:
  Time() = default;
  Time(std::int64_t v) : Time(Rat(v)) {}  // NOLINT(google-explicit-constructor)
  Time(Rat v) : value_(std::move(v)) {    // NOLINT(google-explicit-constructor)
    if (value_.sign() < 0) throw ModelError("negative time " + value_.str());
  }

  static Time parse(std::string_view text) { return Time(Rat::parse(text)); }

  const Rat& value() const { return value_; }
  std::string str() const { return value_.str(); }
  bool is_zero() const { return value_.is_zero(); }

  friend Time operator+(const Time& a, const Time& b) { return Time(a.value_ + b.value_); }
  friend bool operator==(const Time&, const Time&) = default;
  friend std::strong_ordering operator<=>(const Time& a, const Time& b) { return a.value_ <=> b.value_; }
  friend std::ostream& operator<<(std::ostream& os, const Time& t) { return os << t.value_; }

private:
  Rat value_{0};
};

}  // namespace rtlha

template <>
struct std::hash<rtlha::Rat> {
  std::size_t operator()(const rtlha::Rat& r) const { return std::hash<std::string>{}(r.str()); }
};
