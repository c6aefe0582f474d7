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

#ifndef FWSIMP_SEMANTICS_H_
#define FWSIMP_SEMANTICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fwsimp/core.h"

namespace fwsimp {

// Result of running one chain. kFellThrough and kReturnedEarly both leave the
// packet undecided; kReturnedEarly only arises from a matching Return inside
// a called chain.
enum class ChainOutcome : std::uint8_t {
  kAllow,
  kDeny,
  kFellThrough,
  kReturnedEarly
};

FilterDecision ToDecision(ChainOutcome outcome);
std::string_view ToString(ChainOutcome outcome);

// One matched rule, recorded in evaluation order. Calls are recorded before
// the rules of the called chain.
struct TraceStep {
  std::string chain;
  std::size_t index;  // 0-based position within `chain`
  Action action;
};
using EvalTrace = std::vector<TraceStep>;

// Runs `chain` as the outermost invocation. Each Call consumes one unit of
// `depth_budget`.
// Throws TopLevelReturn if a Return matches in `chain` itself and
// DepthExhausted if a Call is reached with no budget left.
ChainOutcome eval_chain(const Ruleset& ruleset, const BoolMatcher& gamma,
                        const Packet& packet, std::span<const Rule> chain,
                        int depth_budget, EvalTrace* trace = nullptr,
                        const std::string& chain_name = "<chain>");

// Evaluates [(True, Call start), (True, policy)]. Never returns kUndecided.
// Throws WellFormednessError when `start_chain` has no builtin policy.
FilterDecision eval_firewall(const Ruleset& ruleset, const BoolMatcher& gamma,
                             const Packet& packet,
                             const std::string& start_chain,
                             EvalTrace* trace = nullptr);

// A flat rule list run the way eval_firewall runs a start chain: the list is
// entered through a Call, and `fallback` applies when it does not decide.
FilterDecision eval_list(std::span<const Rule> rules, const BoolMatcher& gamma,
                         const Packet& packet, Policy fallback);

struct LoopCheck {
  bool ok = true;
  // Witness cycle, first chain repeated at the end: [A, B, A].
  std::vector<std::string> cycle;
  // Longest call path (in edges) from the start chain; valid when ok.
  int depth = 0;
};

// Call graph over the chains reachable from `start_chain`.
LoopCheck check_no_loops(const Ruleset& ruleset, const std::string& start_chain);

// Set of final states t' for which <chain, t> => t' is derivable, found by
// exhaustive search over every rule application and every split point.
// Bit i is set for FilterDecision value i. Slow; meant as a test oracle.
std::uint8_t derivable_states(const Ruleset& ruleset, const BoolMatcher& gamma,
                              const Packet& packet, std::span<const Rule> chain,
                              FilterDecision start);

bool check_derivation(const Ruleset& ruleset, const BoolMatcher& gamma,
                      const Packet& packet, std::span<const Rule> chain,
                      FilterDecision start, FilterDecision final_state);

}  // namespace fwsimp

#endif  // FWSIMP_SEMANTICS_H_
