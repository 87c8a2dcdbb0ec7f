#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace reviewflow {

/// Exact base-10 number: value = mantissa * 10^exponent, always normalized
/// (mantissa carries no trailing zeros, zero has exponent 0).
///
/// Used wherever binary floating point would drift: token prices, ledger
/// totals, filter comparisons, half-integer consensus scores. Arithmetic
/// throws std::overflow_error instead of silently losing digits.
class Decimal {
 public:
  Decimal() = default;
  Decimal(long long mantissa, int exponent);

  static Decimal from_int(long long value) { return Decimal(value, 0); }

  /// Accepts [+-]? digits [. digits] ([eE] [+-]? digits)?, also ".5" / "5.".
  static std::optional<Decimal> parse(std::string_view text);
  static Decimal parse_or_throw(std::string_view text);

  long long mantissa() const { return mantissa_; }
  int exponent() const { return exponent_; }
  bool is_zero() const { return mantissa_ == 0; }
  bool is_negative() const { return mantissa_ < 0; }

  Decimal operator-() const;
  Decimal operator+(const Decimal& other) const;
  Decimal operator-(const Decimal& other) const;
  Decimal operator*(const Decimal& other) const;
  Decimal& operator+=(const Decimal& other) { return *this = *this + other; }

  std::strong_ordering operator<=>(const Decimal& other) const;
  bool operator==(const Decimal& other) const {
    return mantissa_ == other.mantissa_ && exponent_ == other.exponent_;
  }

  double to_double() const;

  /// Canonical plain-decimal rendering, no exponent notation: "0.00027",
  /// "-1.5", "3", "150000".
  std::string to_string() const;

  /// Fixed-point rendering with exactly `places` fractional digits.
  /// Throws if the value has more fractional digits than `places`.
  std::string to_fixed(int places) const;

 private:
  void normalize();

  long long mantissa_ = 0;
  int exponent_ = 0;
};

}  // namespace reviewflow
