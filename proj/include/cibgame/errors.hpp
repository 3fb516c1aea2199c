// Copyright 2026 The cibgame Authors.
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

#ifndef CIBGAME_ERRORS_HPP_
#define CIBGAME_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cibgame {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: inconsistent dimensions, bad files, out-of-range indices.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A configured size cap was exceeded; the operation refused to run.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// The sequence-form oracle was asked to solve an imperfect-recall tree.
class ImperfectRecall : public Error {
 public:
  ImperfectRecall(const std::string& what, std::string first,
                  std::string second)
      : Error(what), first_history(std::move(first)),
        second_history(std::move(second)) {}
  std::string first_history;
  std::string second_history;
};

// An LP did not reach an optimal basis where one was required.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace cibgame

#endif  // CIBGAME_ERRORS_HPP_
