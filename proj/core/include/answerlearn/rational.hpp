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

#ifndef ANSWERLEARN_RATIONAL_HPP_
#define ANSWERLEARN_RATIONAL_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace answerlearn {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Parses "p/q", an integer, or a decimal literal ("0.125", "1e-3") exactly.
/// Throws Error(kParseError) on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Exact conversion of the shortest round-trip decimal form of `value`.
/// Recovers the literal a JSON document contained for ordinary decimals.
Rational rational_from_double(double value);

/// Canonical "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

double to_double(const Rational& value);

BigInt floor(const Rational& value);
BigInt ceil(const Rational& value);

// Largest e with base^e <= n. Requires base >= 2 and n >= 1.
std::uint64_t floor_log(std::uint64_t n, std::uint64_t base);

// True iff value <= log_base(n), decided exactly when log_base(n) is an
// integer and with 100 significant digits otherwise (log_base(n) is then
// irrational and cannot coincide with a rational).
bool rational_le_log(const Rational& value, std::uint64_t n, std::uint64_t base);

BigInt pow(const BigInt& base, std::uint64_t exponent);
Rational pow(const Rational& base, std::uint64_t exponent);

}  // namespace answerlearn

#endif  // ANSWERLEARN_RATIONAL_HPP_
