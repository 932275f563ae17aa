// Copyright 2026 The answerlearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "answerlearn/rational.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "answerlearn/common.hpp"

namespace answerlearn {
namespace {

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::kParseError, "not a rational: '" + std::string(text) + "'");
}

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) bad(whole);
  for (char c : digits) {
    if (c < '0' || c > '9') bad(whole);
  }
  // A leading zero would make the BigInt string constructor read octal.
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return BigInt(std::string(digits));
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    if (!exp_part.empty() && exp_part.front() == '+') exp_part.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), exponent);
    if (ec != std::errc() || ptr != exp_part.data() + exp_part.size() || exp_part.empty()) bad(text);
    if (std::llabs(exponent) > 100000) bad(text);
    s = s.substr(0, e);
  }
  std::string digits;
  long long scale = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) bad(text);
    digits = std::string(int_part) + std::string(frac_part);
    scale = static_cast<long long>(frac_part.size());
  } else {
    digits = std::string(s);
  }
  Rational value(parse_integer(digits, text));
  const long long shift = exponent - scale;
  const BigInt ten_pow = pow(BigInt(10), static_cast<std::uint64_t>(std::llabs(shift)));
  if (shift >= 0) {
    value *= ten_pow;
  } else {
    value /= ten_pow;
  }
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) bad(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    BigInt n = parse_integer(num, text);
    BigInt d = parse_integer(text.substr(slash + 1), text);
    if (d == 0) bad(text);
    Rational r(n, d);
    return negative ? Rational(-r) : r;
  }
  return parse_decimal(text);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::kParseError, "non-finite number");
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error(ErrorCode::kParseError, "unprintable number");
  return parse_decimal(std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data())));
}

std::string to_string(const Rational& value) {
  const BigInt& d = boost::multiprecision::denominator(value);
  if (d == 1) return boost::multiprecision::numerator(value).str();
  return boost::multiprecision::numerator(value).str() + "/" + d.str();
}

std::string to_string(const BigInt& value) { return value.str(); }

double to_double(const Rational& value) { return value.convert_to<double>(); }

BigInt floor(const Rational& value) {
  const BigInt& n = boost::multiprecision::numerator(value);
  const BigInt& d = boost::multiprecision::denominator(value);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

BigInt ceil(const Rational& value) {
  const BigInt& n = boost::multiprecision::numerator(value);
  const BigInt& d = boost::multiprecision::denominator(value);
  BigInt q = n / d;
  if (n > 0 && q * d != n) q += 1;
  return q;
}

std::uint64_t floor_log(std::uint64_t n, std::uint64_t base) {
  if (base < 2 || n < 1) throw Error(ErrorCode::kInvalidArgument, "floor_log needs base >= 2, n >= 1");
  std::uint64_t e = 0;
  std::uint64_t p = 1;
  while (p <= n / base) {
    p *= base;
    ++e;
  }
  return e;
}

bool rational_le_log(const Rational& value, std::uint64_t n, std::uint64_t base) {
  if (base < 2 || n < 1) throw Error(ErrorCode::kInvalidArgument, "rational_le_log needs base >= 2, n >= 1");
  if (value <= 0) return true;
  const BigInt& p = boost::multiprecision::numerator(value);
  const BigInt& q = boost::multiprecision::denominator(value);
  // base^p <= n^q, exactly when the powers stay small.
  const double bits = p.convert_to<double>() * std::log2(static_cast<double>(base)) +
                      q.convert_to<double>() * std::log2(static_cast<double>(n));
  if (bits < 4.0e6) {
    return pow(BigInt(base), p.convert_to<std::uint64_t>()) <=
           pow(BigInt(n), q.convert_to<std::uint64_t>());
  }
  using Big = boost::multiprecision::cpp_bin_float_100;
  Big lhs = Big(p) / Big(q);
  Big rhs = boost::multiprecision::log(Big(n)) / boost::multiprecision::log(Big(base));
  return lhs <= rhs;
}

BigInt pow(const BigInt& base, std::uint64_t exponent) {
  if (exponent > std::numeric_limits<unsigned>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "exponent too large");
  }
  return boost::multiprecision::pow(base, static_cast<unsigned>(exponent));
}

Rational pow(const Rational& base, std::uint64_t exponent) {
  return Rational(pow(boost::multiprecision::numerator(base), exponent),
                  pow(boost::multiprecision::denominator(base), exponent));
}

}  // namespace answerlearn
