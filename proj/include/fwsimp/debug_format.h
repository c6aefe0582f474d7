// Copyright 2026 The fwsimp Authors
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

#ifndef FWSIMP_DEBUG_FORMAT_H_
#define FWSIMP_DEBUG_FORMAT_H_

#include <ostream>
#include <string>
#include <string_view>

#include "fwsimp/core.h"

namespace fwsimp {

// S-expression rendering of the match algebra:
//   true | (not M) | (and M M) | (src CIDR) | (dst CIDR) | (proto NAME)
//   | (extra "MODULE" "OPTIONS")
// Toy-width CIDRs print as base/len@width. ParseDebugMatch inverts it.
std::string ToDebugString(const Primitive& primitive);
std::string ToDebugString(const MatchExpr& m);
std::string ToDebugString(const Action& action);
std::string ToDebugString(const Rule& rule);

// Throws ParseError (line 1, column of the offending character).
MatchExpr ParseDebugMatch(std::string_view text);

std::ostream& operator<<(std::ostream& os, const MatchExpr& m);
std::ostream& operator<<(std::ostream& os, const Rule& rule);

}  // namespace fwsimp

#endif  // FWSIMP_DEBUG_FORMAT_H_
