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

#ifndef FWSIMP_IPTABLES_SAVE_H_
#define FWSIMP_IPTABLES_SAVE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fwsimp/core.h"

namespace fwsimp {

struct ParseResult {
  Ruleset ruleset;
  std::vector<std::string> warnings;
};

// Reads the filter table of iptables-save output. Other tables are skipped
// with a warning. `-s`, `-d` and `-p tcp|udp|icmp|all` (optionally negated)
// become structured primitives; every maximal run of other match options
// becomes one Extra holding the run's text verbatim. Conjuncts are folded
// right-associatively in order of appearance.
// Throws ParseError for malformed input and WellFormednessError when a rule
// jumps to an undeclared chain.
ParseResult parse_save(std::string_view text);

// Emits the whole filter table: builtin chains first, then user chains by
// name. Throws NotEmittable for matches that cannot be written as a single
// iptables rule.
std::string emit_save(const Ruleset& ruleset);

// Emits one chain. `policy` is ignored for user-defined chains. Call
// actions are rejected since the target would be undeclared.
std::string emit_save(std::span<const Rule> rules, const std::string& chain,
                      Policy policy);

}  // namespace fwsimp

#endif  // FWSIMP_IPTABLES_SAVE_H_
