#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sboxlab {

/// Exact rational with a positive denominator, always stored reduced.
///
/// Every normalized metric in this library is a ratio of integer counts
/// (mostly dyadic), so reports carry these instead of doubles.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "num/den", or just "num" for integers.
  std::string to_fraction() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// True when the decimal expansion is finite (denominator is 2^a 5^b).
  bool terminates() const {
    std::int64_t d = den_;
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
  }

  /// Decimal rendering. Exact when the expansion terminates; otherwise
  /// rounded half-up to `max_fraction_digits` places.
  std::string to_decimal(int max_fraction_digits = 12) const {
    __int128 n = num_;
    const bool negative = n < 0;
    if (negative) n = -n;
    const __int128 d = den_;
    std::string out = negative ? "-" : "";
    __int128 whole = n / d;
    __int128 rem = n % d;

    std::string frac;
    if (terminates()) {
      while (rem != 0) {
        rem *= 10;
        frac.push_back(static_cast<char>('0' + static_cast<int>(rem / d)));
        rem %= d;
      }
    } else {
      for (int i = 0; i < max_fraction_digits; ++i) {
        rem *= 10;
        frac.push_back(static_cast<char>('0' + static_cast<int>(rem / d)));
        rem %= d;
      }
      if (rem * 2 >= d) {
        int i = static_cast<int>(frac.size()) - 1;
        for (; i >= 0; --i) {
          if (frac[i] == '9') {
            frac[i] = '0';
          } else {
            ++frac[i];
            break;
          }
        }
        if (i < 0) ++whole;
      }
      while (!frac.empty() && frac.back() == '0') frac.pop_back();
    }
    out += int128_to_string(whole);
    if (!frac.empty()) out += "." + frac;
    if (out == "-0") out = "0";
    return out;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational abs(const Rational& r) { return Rational(r.num_ < 0 ? -r.num_ : r.num_, r.den_); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_fraction(); }

 private:
  static Rational from_wide(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX) throw std::overflow_error("Rational: overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  static std::string int128_to_string(__int128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
      s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
      v /= 10;
    }
    return s;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace sboxlab
