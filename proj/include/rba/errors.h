// Copyright 2026 The rba Authors.
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

#ifndef RBA_ERRORS_H_
#define RBA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rba {

// Base of every error the library raises. The subclasses map one-to-one onto
// the CLI exit codes (validation 2, certification/audit 3, solver 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad dimensions, invalid probabilities, unknown scenario
// keys, infeasible constraint sets.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A response oracle produced a target point outside its certified set.
class CertificationError : public Error {
 public:
  using Error::Error;
};

// Internal numerical failure (simplex did not converge, certificate broken).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace rba

#endif  // RBA_ERRORS_H_
