#include "reviewflow/decimal.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace reviewflow {

namespace {

using int128 = __int128;

constexpr long long kMantissaMax = std::numeric_limits<long long>::max();

long long narrow_or_throw(int128 v) {
  if (v > int128(kMantissaMax) || v < -int128(kMantissaMax)) {
    throw std::overflow_error("decimal overflow");
  }
  return static_cast<long long>(v);
}

// 10^k as int128; k <= 38 fits.
int128 pow10_128(int k) {
  int128 r = 1;
  while (k-- > 0) r *= 10;
  return r;
}

int digit_count(long long m) {
  if (m < 0) m = -m;
  int n = 1;
  while (m >= 10) {
    m /= 10;
    ++n;
  }
  return n;
}

}  // namespace

Decimal::Decimal(long long mantissa, int exponent)
    : mantissa_(mantissa), exponent_(exponent) {
  normalize();
}

void Decimal::normalize() {
  if (mantissa_ == 0) {
    exponent_ = 0;
    return;
  }
  if (mantissa_ == std::numeric_limits<long long>::min()) {
    throw std::overflow_error("decimal mantissa out of range");
  }
  while (mantissa_ % 10 == 0) {
    mantissa_ /= 10;
    ++exponent_;
  }
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool negative = false;
  if (i < n && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }

  int128 mantissa = 0;
  int frac_digits = 0;
  int digits = 0;
  auto take_digits = [&](bool fractional) {
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
      mantissa = mantissa * 10 + (text[i] - '0');
      if (mantissa > int128(kMantissaMax) * 10) {
        // keep absorbing to report overflow, not syntax error
        mantissa = int128(kMantissaMax) * 10;
      }
      if (fractional) ++frac_digits;
      ++digits;
      ++i;
    }
  };

  take_digits(false);
  if (i < n && text[i] == '.') {
    ++i;
    take_digits(true);
  }
  if (digits == 0) return std::nullopt;

  long long exp10 = -frac_digits;
  if (i < n && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_neg = false;
    if (i < n && (text[i] == '+' || text[i] == '-')) {
      exp_neg = text[i] == '-';
      ++i;
    }
    if (i >= n || !std::isdigit(static_cast<unsigned char>(text[i]))) {
      return std::nullopt;
    }
    long long e = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
      e = e * 10 + (text[i] - '0');
      if (e > 100000) return std::nullopt;
      ++i;
    }
    exp10 += exp_neg ? -e : e;
  }
  if (i != n) return std::nullopt;

  // drop trailing zeros before the range check so "1230000e-4" etc. fit
  while (mantissa != 0 && mantissa % 10 == 0) {
    mantissa /= 10;
    ++exp10;
  }
  if (mantissa > int128(kMantissaMax)) return std::nullopt;
  if (exp10 < std::numeric_limits<int>::min() ||
      exp10 > std::numeric_limits<int>::max()) {
    return std::nullopt;
  }
  long long m = static_cast<long long>(mantissa);
  return Decimal(negative ? -m : m, static_cast<int>(exp10));
}

Decimal Decimal::parse_or_throw(std::string_view text) {
  auto d = parse(text);
  if (!d) {
    throw std::invalid_argument("not a decimal number: '" + std::string(text) +
                                "'");
  }
  return *d;
}

Decimal Decimal::operator-() const {
  Decimal r;
  r.mantissa_ = -mantissa_;
  r.exponent_ = mantissa_ == 0 ? 0 : exponent_;
  return r;
}

Decimal Decimal::operator+(const Decimal& other) const {
  if (mantissa_ == 0) return other;
  if (other.mantissa_ == 0) return *this;
  int e = std::min(exponent_, other.exponent_);
  int ka = exponent_ - e;
  int kb = other.exponent_ - e;
  if (ka > 38 || kb > 38) throw std::overflow_error("decimal exponent gap");
  int128 sum = int128(mantissa_) * pow10_128(ka) +
               int128(other.mantissa_) * pow10_128(kb);
  // strip zeros while out of range
  while ((sum > int128(kMantissaMax) || sum < -int128(kMantissaMax)) &&
         sum % 10 == 0) {
    sum /= 10;
    ++e;
  }
  return Decimal(narrow_or_throw(sum), e);
}

Decimal Decimal::operator-(const Decimal& other) const {
  return *this + (-other);
}

Decimal Decimal::operator*(const Decimal& other) const {
  int128 prod = int128(mantissa_) * int128(other.mantissa_);
  long long e = static_cast<long long>(exponent_) + other.exponent_;
  while ((prod > int128(kMantissaMax) || prod < -int128(kMantissaMax)) &&
         prod % 10 == 0) {
    prod /= 10;
    ++e;
  }
  if (e < std::numeric_limits<int>::min() ||
      e > std::numeric_limits<int>::max()) {
    throw std::overflow_error("decimal exponent overflow");
  }
  return Decimal(narrow_or_throw(prod), static_cast<int>(e));
}

std::strong_ordering Decimal::operator<=>(const Decimal& other) const {
  const bool neg_a = mantissa_ < 0;
  const bool neg_b = other.mantissa_ < 0;
  if (mantissa_ == 0 && other.mantissa_ == 0) return std::strong_ordering::equal;
  if (neg_a != neg_b) {
    return neg_a ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (mantissa_ == 0) {
    return neg_b ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (other.mantissa_ == 0) {
    return neg_a ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  // Same sign, both nonzero: compare decimal magnitude first so huge
  // exponent gaps never need wide arithmetic.
  const long long mag_a = static_cast<long long>(digit_count(mantissa_)) + exponent_;
  const long long mag_b =
      static_cast<long long>(digit_count(other.mantissa_)) + other.exponent_;
  if (mag_a != mag_b) {
    const bool bigger = mag_a > mag_b;
    return bigger != neg_a ? std::strong_ordering::greater
                           : std::strong_ordering::less;
  }
  // Equal magnitude implies the exponent gap is at most 18 digits.
  int e = std::min(exponent_, other.exponent_);
  int128 a = int128(mantissa_) * pow10_128(exponent_ - e);
  int128 b = int128(other.mantissa_) * pow10_128(other.exponent_ - e);
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double Decimal::to_double() const {
  return static_cast<double>(mantissa_) * std::pow(10.0, exponent_);
}

std::string Decimal::to_string() const {
  if (mantissa_ == 0) return "0";
  std::string digits = std::to_string(mantissa_ < 0 ? -mantissa_ : mantissa_);
  std::string out = mantissa_ < 0 ? "-" : "";
  if (exponent_ >= 0) {
    out += digits;
    out.append(static_cast<std::size_t>(exponent_), '0');
    return out;
  }
  const std::size_t frac = static_cast<std::size_t>(-exponent_);
  if (digits.size() > frac) {
    out += digits.substr(0, digits.size() - frac);
    out += '.';
    out += digits.substr(digits.size() - frac);
  } else {
    out += "0.";
    out.append(frac - digits.size(), '0');
    out += digits;
  }
  return out;
}

std::string Decimal::to_fixed(int places) const {
  if (places < 0) throw std::invalid_argument("to_fixed: negative places");
  if (exponent_ < -places) {
    throw std::invalid_argument("to_fixed would truncate " + to_string());
  }
  // Rescale so the exponent is exactly -places, then print.
  int128 m = int128(mantissa_) * pow10_128(exponent_ + places);
  long long mm = narrow_or_throw(m);
  std::string digits = std::to_string(mm < 0 ? -mm : mm);
  std::string out = mm < 0 ? "-" : "";
  if (places == 0) return out + digits;
  const std::size_t frac = static_cast<std::size_t>(places);
  if (digits.size() > frac) {
    out += digits.substr(0, digits.size() - frac);
    out += '.';
    out += digits.substr(digits.size() - frac);
  } else {
    out += "0.";
    out.append(frac - digits.size(), '0');
    out += digits;
  }
  return out;
}

}  // namespace reviewflow
