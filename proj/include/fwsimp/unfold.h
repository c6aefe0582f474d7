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

#ifndef FWSIMP_UNFOLD_H_
#define FWSIMP_UNFOLD_H_

#include <string>
#include <vector>

#include "fwsimp/core.h"

namespace fwsimp {

// [(m AND extra, a) for (m, a) in rules]
std::vector<Rule> add_match(const MatchExpr& extra,
                            const std::vector<Rule>& rules);

// Drops each Return rule and conjoins its negated match onto every rule after
// it. The output contains no Return.
std::vector<Rule> process_return(const std::vector<Rule>& rules);

// Inlines one level of calls: (m, Call c) becomes
// add_match(m, process_return(ruleset[c])). Throws UndefinedChain.
std::vector<Rule> process_call(const Ruleset& ruleset,
                               const std::vector<Rule>& rules);

// Flattens `start_chain` into a single list with no Call or Return. Returns
// at the top level fall through to the default policy, as iptables does for
// builtin chains, so the start chain goes through process_return first.
// Throws LoopDetected for call cycles and NotConverged if calls remain after
// call-depth iterations.
std::vector<Rule> unfold_completely(const Ruleset& ruleset,
                                    const std::string& start_chain);

// Semantics-preserving cleanup for unfolded lists, applied in this order:
//   1. Reject becomes Drop.
//   2. Log and Empty rules are deleted.
//   3. Matches are simplified bottom-up: a 0.0.0.0/0 source or destination
//      becomes True, And(True, m) and And(m, True) become m, Not(Not(m))
//      becomes m.
//   4. Rules with a Not(True) top-level conjunct are deleted.
// The 0.0.0.0/0 rewrite assumes a matcher that reads CIDRs as address
// ranges. Throws UnsupportedAction on Call or Return.
std::vector<Rule> optimize(const std::vector<Rule>& rules);

// Step 3 of optimize on its own.
MatchExpr simplify_match(const MatchExpr& m);

}  // namespace fwsimp

#endif  // FWSIMP_UNFOLD_H_
