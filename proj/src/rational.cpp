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

#include "norobi/rational.hpp"

#include <cctype>

#include "norobi/errors.hpp"

namespace norobi {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) {
    throw SemanticError("denominator zero in rational " + num.str() + "/0");
  }
  // The two-integer cpp_rational constructor does not normalize mixed signs;
  // exact division does.
  return Rational(num) / Rational(den);
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  std::string_view digits = s;
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!all_digits(digits)) {
    throw ParseError("malformed rational '" + std::string(whole) + "'");
  }
  Integer value{std::string(digits)};
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text, text));
  }
  const Integer num = parse_integer(text.substr(0, slash), text);
  const std::string_view den_text = text.substr(slash + 1);
  if (!all_digits(den_text)) {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  const Integer den{std::string(den_text)};
  if (den == 0) {
    throw SemanticError("denominator zero in rational '" + std::string(text) +
                        "'");
  }
  return make_rational(num, den);
}

std::string to_string(const Rational& value) {
  const Integer num = numerator(value);
  const Integer den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Integer floor_int(const Rational& value) {
  const Integer num = numerator(value);
  const Integer den = denominator(value);
  Integer q = num / den;  // truncates toward zero
  if (num % den != 0 && num < 0) --q;
  return q;
}

Integer ceil_int(const Rational& value) {
  const Integer num = numerator(value);
  const Integer den = denominator(value);
  Integer q = num / den;
  if (num % den != 0 && num > 0) ++q;
  return q;
}

bool is_integral(const Rational& value) { return denominator(value) == 1; }

}  // namespace norobi
