// Copyright 2026 The norobi authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace norobi {

using Integer = boost::multiprecision::cpp_int;

/// Exact rational number over arbitrary-precision integers. Always reduced,
/// denominator always positive. No floating point enters the core anywhere.
using Rational = boost::multiprecision::cpp_rational;

/// Builds num/den, throwing SemanticError("denominator zero ...") on den == 0.
Rational make_rational(const Integer& num, const Integer& den);

/// Parses "p" or "p/q" with p an optionally signed decimal integer and q a
/// positive decimal integer. Throws ParseError on malformed text and
/// SemanticError on a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" when the denominator is 1, else "p/q".
std::string to_string(const Rational& value);

Integer floor_int(const Rational& value);
Integer ceil_int(const Rational& value);
bool is_integral(const Rational& value);

}  // namespace norobi
