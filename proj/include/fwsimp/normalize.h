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

#ifndef FWSIMP_NORMALIZE_H_
#define FWSIMP_NORMALIZE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fwsimp/core.h"

namespace fwsimp {

inline constexpr std::size_t kDefaultBlowupLimit = 1'000'000;

// True iff every negation applies directly to a primitive.
bool is_nnf(const MatchExpr& m);

// Length of nnf_normalize(m), computed without building it. Saturates at
// UINT64_MAX.
std::uint64_t nnf_count(const MatchExpr& m);

// Splits `m` into NNF expressions whose disjunction, read as consecutive
// rules sharing one action, is equivalent to `m`:
//   n True          = [True]
//   n (m1 AND m2)   = [x AND y. x <- n m1, y <- n m2]
//   n (NOT (m1 AND m2)) = n (NOT m1) ++ n (NOT m2)
//   n (NOT NOT m)   = n m
//   n (NOT True)    = []
//   n x = [x],  n (NOT x) = [NOT x]   for primitives x
// Every recursive call is on an expression with fewer nodes, so this
// terminates. Throws BlowupLimitExceeded if the result would hold more than
// `limit` entries; nothing is built in that case.
std::vector<MatchExpr> nnf_normalize(const MatchExpr& m,
                                     std::size_t limit = kDefaultBlowupLimit);

// Replaces each (m, a) in place by [(m', a) for m' in n m]. Rules must be
// Accept or Drop (UnsupportedAction otherwise). A rule whose expansion
// exceeds `limit` raises BlowupLimitExceeded carrying its index.
std::vector<Rule> normalize_rules(const std::vector<Rule>& rules,
                                  std::size_t limit = kDefaultBlowupLimit);

}  // namespace fwsimp

#endif  // FWSIMP_NORMALIZE_H_
