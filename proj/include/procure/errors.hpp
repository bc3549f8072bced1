// Copyright 2026 The procure Authors
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

namespace procure {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (ladders, instances, files).
class InputError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A winner whose removal leaves demand uncoverable; its Clarke pivot
// payment is undefined.
class PivotalBidderError : public Error {
 public:
  explicit PivotalBidderError(std::string participant)
      : Error("participant '" + participant +
              "' is pivotal: demand cannot be covered without it"),
        participant_(std::move(participant)) {}

  const std::string& participant() const { return participant_; }

 private:
  std::string participant_;
};

class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// Some daily scenario cannot cover the residual shortfall.
class ScenarioInfeasibleError : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

}  // namespace procure
