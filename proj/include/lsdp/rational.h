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

#ifndef LSDP_RATIONAL_H_
#define LSDP_RATIONAL_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace lsdp {

// Exact rational used for empirical errors and error thresholds, so class
// membership tests never depend on floating-point rounding.
using Rational = boost::rational<std::int64_t>;

// Accepts "a/b", integers, and plain decimals such as "0.125".
Rational ParseRational(std::string_view text);

// r^e for e >= 0; throws ParameterError on int64 overflow.
Rational Pow(const Rational& r, int e);

double ToDouble(const Rational& r);
std::string ToString(const Rational& r);

}  // namespace lsdp

#endif  // LSDP_RATIONAL_H_
