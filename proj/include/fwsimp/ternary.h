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

#ifndef FWSIMP_TERNARY_H_
#define FWSIMP_TERNARY_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fwsimp/core.h"

namespace fwsimp {

// Kleene conjunction and negation.
TernaryValue ternary_and(TernaryValue a, TernaryValue b);
TernaryValue ternary_not(TernaryValue a);

TernaryValue ternary_eval(const TernaryMatcher& gt, const MatchExpr& m,
                          const Packet& p);

// Whether rule (m, action) applies to `p` under `tactic`. An unknown match
// applies when the tactic favours the action: in-doubt-allow applies unknown
// Accept rules and skips unknown Drop rules, in-doubt-deny does the opposite.
// Throws UnsupportedAction unless `action` is Accept or Drop.
bool approx_rule_matches(const TernaryMatcher& gt, Tactic tactic,
                         const MatchExpr& m, const Action& action,
                         const Packet& p);

// First applicable rule decides; `fallback` (Allow or Deny) otherwise.
FilterDecision eval_approx(std::span<const Rule> rules,
                           const TernaryMatcher& gt, Tactic tactic,
                           const Packet& p, FilterDecision fallback);

inline constexpr std::size_t kDefaultUniverseCap = std::size_t{1} << 24;

// Packets of `universe` that eval_approx allows, in universe order.
// Throws UniverseTooLarge when the universe exceeds `cap`.
std::vector<Packet> accepted_set(std::span<const Rule> rules,
                                 const TernaryMatcher& gt, Tactic tactic,
                                 std::span<const Packet> universe,
                                 FilterDecision fallback = FilterDecision::kDeny,
                                 std::size_t cap = kDefaultUniverseCap);

// Rewrites the match of an Accept/Drop rule so that it contains no primitive
// `gt` classifies as unknown, without changing its behaviour under `tactic`.
// An unknown primitive, negated or not, becomes True when the tactic applies
// unknown matches for the rule's action and Not(True) otherwise. Negated
// conjunctions follow the De Morgan case split:
//   pu(Not(m1 AND m2)) = True               if pu(Not m1) = True
//                        True               if pu(Not m2) = True
//                        pu(Not m2)         if pu(Not m1) = Not True
//                        pu(Not m1)         if pu(Not m2) = Not True
//                        Not(Not pu(Not m1) AND Not pu(Not m2))  otherwise
// Throws UnsupportedAction for other actions.
Rule process_unknowns(const TernaryMatcher& gt, Tactic tactic, const Rule& rule);

// optimize, process_unknowns on every rule, optimize again, then drop
// everything after the first rule whose match is True. Call and Return
// raise UnsupportedAction.
std::vector<Rule> simplify_ruleset(const std::vector<Rule>& rules,
                                   const TernaryMatcher& gt, Tactic tactic);

struct StripResult {
  std::vector<Rule> rules;
  bool removed = false;
  std::optional<std::string> warning;
};

// Removes the connection-tracking rule that accepts ESTABLISHED traffic when
// it leads the list, i.e. no earlier rule can accept or call. The rule must be
// an Accept whose match has a `state` or `conntrack` Extra conjunct mentioning
// ESTABLISHED. At most one rule is removed; a non-leading candidate leaves the
// list unchanged and sets `warning`.
StripResult strip_established_prefix(const std::vector<Rule>& rules);

}  // namespace fwsimp

#endif  // FWSIMP_TERNARY_H_
