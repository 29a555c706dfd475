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

#ifndef NSUM_STEM_HPP_
#define NSUM_STEM_HPP_

#include <string>
#include <string_view>

namespace nsum {

// One pass of the classic Porter (1980) suffix-stripping algorithm.
// Tokens that are not purely lowercase ASCII letters are returned as-is.
std::string PorterStem(std::string_view token);

// PorterStem iterated to a fixed point. A single Porter pass is not
// idempotent ("agreed" -> "agre" -> "agr"); the fixed point is, which is
// what stem-level matching needs.
std::string Stem(std::string_view token);

}  // namespace nsum

#endif  // NSUM_STEM_HPP_
