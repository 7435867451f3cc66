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

#ifndef LSDP_ERRORS_H_
#define LSDP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace lsdp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point index outside the domain, or objects over different domains.
class DomainMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptySampleError : public Error {
 public:
  using Error::Error;
};

// SOA of the empty class.
class UndefinedSoaError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration, e.g. ldim(H) > d.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Fewer counterexamples than teachers when splitting a mistake buffer.
class SplitTooSmallError : public Error {
 public:
  using Error::Error;
};

// A stream or sample that no member of the class labels correctly.
class NotRealizableError : public Error {
 public:
  using Error::Error;
};

// A guaranteed bound failed at runtime.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// An exact search ran past its configured limits. Carries the best upper
// bound known at the time (e.g. the degree of the greedy tree), or -2 if
// none is available.
class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& what, int best_upper_bound)
      : Error(what), best_upper_bound_(best_upper_bound) {}
  int best_upper_bound() const { return best_upper_bound_; }

 private:
  int best_upper_bound_;
};

}  // namespace lsdp

#endif  // LSDP_ERRORS_H_
