// Copyright 2026 The juliacert Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace juliacert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: bad numbers, bad files, bad parameter combinations.
class InputError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class WidthBlowup : public Error {
 public:
  using Error::Error;
};

class PeriodCapExceeded : public Error {
 public:
  using Error::Error;
};

class MultipleRootUnresolved : public Error {
 public:
  using Error::Error;
};

class CertificateInvalid : public Error {
 public:
  using Error::Error;
};

// A dovetailed computation ran out of its global step budget.
class Inconclusive : public Error {
 public:
  using Error::Error;
};

}  // namespace juliacert
