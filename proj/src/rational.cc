// Copyright 2026 The lsdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lsdp/rational.h"

#include <cctype>
#include <limits>

#include "lsdp/errors.h"

namespace lsdp {
namespace {

std::int64_t ParseInt(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw ParseError("malformed rational: " + std::string(whole));
  std::int64_t value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("malformed rational: " + std::string(whole));
    }
    if (value > (std::numeric_limits<std::int64_t>::max() - 9) / 10) {
      throw ParseError("rational out of range: " + std::string(whole));
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    const std::int64_t num = ParseInt(body.substr(0, slash), text);
    const std::int64_t den = ParseInt(body.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator: " + std::string(text));
    result = Rational(num, den);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = body.substr(0, dot);
    std::string_view frac_part = body.substr(dot + 1);
    if (frac_part.size() > 15) {
      throw ParseError("too many decimal places: " + std::string(text));
    }
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : ParseInt(int_part, text);
    const std::int64_t frac = frac_part.empty() ? 0 : ParseInt(frac_part, text);
    result = Rational(whole) + Rational(frac, den);
  } else {
    result = Rational(ParseInt(body, text));
  }
  return negative ? -result : result;
}

Rational Pow(const Rational& r, int e) {
  Rational out(1);
  constexpr std::int64_t kLimit = std::int64_t{1} << 31;
  for (int i = 0; i < e; ++i) {
    if (out.numerator() > kLimit || out.denominator() > kLimit ||
        r.numerator() > kLimit || r.denominator() > kLimit) {
      throw ParameterError("rational power overflows 64-bit arithmetic");
    }
    out *= r;
  }
  return out;
}

double ToDouble(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

std::string ToString(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace lsdp
