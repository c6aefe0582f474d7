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

#ifndef FWSIMP_IPSPACE_H_
#define FWSIMP_IPSPACE_H_

#include <optional>
#include <vector>

#include "fwsimp/cidr.h"
#include "fwsimp/core.h"

namespace fwsimp {

// Merges the conjuncts of an NNF Accept/Drop rule so that it carries at most
// one positive source range, one positive destination range and one positive
// protocol. Returns nullopt when the rule can never match: disjoint ranges,
// two different concrete protocols, or a protocol and its own negation.
// Negated ranges are kept as they are. The result lists the source range,
// destination range and protocol first, then the remaining conjuncts in their
// original order, folded right-associatively.
// Throws NotNnf for non-NNF matches, UnsupportedAction for other actions.
std::optional<Rule> compress_rule(const Rule& rule);

// compress_rule over a list, dropping unmatchable rules.
std::vector<Rule> compress_rules(const std::vector<Rule>& rules);

}  // namespace fwsimp

#endif  // FWSIMP_IPSPACE_H_
