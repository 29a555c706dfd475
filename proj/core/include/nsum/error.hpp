// Copyright 2026 The nsum Authors.
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

#ifndef NSUM_ERROR_HPP_
#define NSUM_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace nsum {

// All signaled errors carry a short machine-readable code (for example
// "shape-error" or "empty-support") next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void Fail(const std::string& code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, const std::string& code, const std::string& message) {
  if (!condition) Fail(code, message);
}

}  // namespace nsum

#endif  // NSUM_ERROR_HPP_
