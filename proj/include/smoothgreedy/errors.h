// Copyright 2026 The smoothgreedy Authors
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

#ifndef SMOOTHGREEDY_ERRORS_H_
#define SMOOTHGREEDY_ERRORS_H_

#include <stdexcept>
#include <string>

namespace smoothgreedy {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed sets, infeasible inputs, non-finite vectors.
class InputError : public Error {
 public:
  using Error::Error;
};

// Mismatched dimensions or unsupported combinations of components.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// Raised by the brute-force routines when an instance exceeds the
// enumeration caps.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_ERRORS_H_
