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

#include "fwsimp/semantics.h"

#include <algorithm>
#include <functional>
#include <map>
#include <utility>

#include "fwsimp/errors.h"

namespace fwsimp {
namespace {

struct Interpreter {
  const Ruleset& ruleset;
  const BoolMatcher& gamma;
  const Packet& packet;
  EvalTrace* trace;

  ChainOutcome Run(std::span<const Rule> chain, const std::string& name,
                   int budget, bool called) const {
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const Rule& rule = chain[i];
      if (!match_eval_bool(gamma, rule.match, packet)) continue;
      if (trace != nullptr) trace->push_back({name, i, rule.action});
      switch (rule.action.kind()) {
        case Action::Kind::kAccept:
          return ChainOutcome::kAllow;
        case Action::Kind::kDrop:
        case Action::Kind::kReject:
          return ChainOutcome::kDeny;
        case Action::Kind::kLog:
        case Action::Kind::kEmpty:
          break;
        case Action::Kind::kReturn:
          if (!called) {
            throw TopLevelReturn("Return matched at top level of chain " +
                                 name);
          }
          return ChainOutcome::kReturnedEarly;
        case Action::Kind::kCall: {
          if (budget <= 0) {
            throw DepthExhausted("call budget exhausted at call to " +
                                 rule.action.target());
          }
          const std::string& target = rule.action.target();
          ChainOutcome inner =
              Run(ruleset.chain(target), target, budget - 1, true);
          if (inner == ChainOutcome::kAllow || inner == ChainOutcome::kDeny) {
            return inner;
          }
          break;
        }
      }
    }
    return ChainOutcome::kFellThrough;
  }
};

constexpr std::uint8_t Bit(FilterDecision d) {
  return static_cast<std::uint8_t>(1u << static_cast<unsigned>(d));
}

// Exhaustive search over derivations. Memoized on the rule span because the
// same sub-spans recur under every split point.
class DerivationSearch {
 public:
  DerivationSearch(const Ruleset& ruleset, const BoolMatcher& gamma,
                   const Packet& packet)
      : ruleset_(ruleset), gamma_(gamma), packet_(packet) {}

  std::uint8_t Derive(std::span<const Rule> rs, FilterDecision t, int budget) {
    // Decision: a decided state never changes. Seq, Skip and the single-rule
    // rules all require an undecided start, so this is the only option.
    if (t != FilterDecision::kUndecided) return Bit(t);

    auto key = std::make_pair(rs.data(), rs.size());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::uint8_t result = 0;
    if (rs.empty()) result |= Bit(FilterDecision::kUndecided);  // Skip
    if (rs.size() == 1) result |= Single(rs.front(), budget);
    // Seq with both halves nonempty; an empty half adds no new states.
    for (std::size_t k = 1; k < rs.size(); ++k) {
      std::uint8_t first = Derive(rs.first(k), FilterDecision::kUndecided,
                                  budget);
      for (FilterDecision mid :
           {FilterDecision::kUndecided, FilterDecision::kAllow,
            FilterDecision::kDeny}) {
        if (first & Bit(mid)) result |= Derive(rs.subspan(k), mid, budget);
      }
    }
    memo_[key] = result;
    return result;
  }

 private:
  std::uint8_t Single(const Rule& rule, int budget) {
    if (!match_eval_bool(gamma_, rule.match, packet_)) {
      return Bit(FilterDecision::kUndecided);  // NoMatch
    }
    switch (rule.action.kind()) {
      case Action::Kind::kAccept:
        return Bit(FilterDecision::kAllow);
      case Action::Kind::kDrop:
      case Action::Kind::kReject:
        return Bit(FilterDecision::kDeny);
      case Action::Kind::kLog:
      case Action::Kind::kEmpty:
        return Bit(FilterDecision::kUndecided);
      case Action::Kind::kReturn:
        return 0;  // no rule applies: the semantics is stuck
      case Action::Kind::kCall: {
        if (budget <= 0) {
          throw DepthExhausted("derivation search exceeded call budget");
        }
        const Chain& callee = ruleset_.chain(rule.action.target());
        // CallResult
        std::uint8_t result =
            Derive(callee, FilterDecision::kUndecided, budget - 1);
        // CallReturn: every matching Return whose prefix stays undecided.
        for (std::size_t j = 0; j < callee.size(); ++j) {
          if (callee[j].action.kind() != Action::Kind::kReturn) continue;
          if (!match_eval_bool(gamma_, callee[j].match, packet_)) continue;
          std::uint8_t prefix =
              Derive(std::span<const Rule>(callee).first(j),
                     FilterDecision::kUndecided, budget - 1);
          if (prefix & Bit(FilterDecision::kUndecided)) {
            result |= Bit(FilterDecision::kUndecided);
          }
        }
        return result;
      }
    }
    return 0;
  }

  const Ruleset& ruleset_;
  const BoolMatcher& gamma_;
  const Packet& packet_;
  std::map<std::pair<const Rule*, std::size_t>, std::uint8_t> memo_;
};

}  // namespace

FilterDecision ToDecision(ChainOutcome outcome) {
  switch (outcome) {
    case ChainOutcome::kAllow:
      return FilterDecision::kAllow;
    case ChainOutcome::kDeny:
      return FilterDecision::kDeny;
    default:
      return FilterDecision::kUndecided;
  }
}

std::string_view ToString(ChainOutcome outcome) {
  switch (outcome) {
    case ChainOutcome::kAllow:
      return "Allow";
    case ChainOutcome::kDeny:
      return "Deny";
    case ChainOutcome::kFellThrough:
      return "FellThrough";
    case ChainOutcome::kReturnedEarly:
      return "ReturnedEarly";
  }
  return "?";
}

ChainOutcome eval_chain(const Ruleset& ruleset, const BoolMatcher& gamma,
                        const Packet& packet, std::span<const Rule> chain,
                        int depth_budget, EvalTrace* trace,
                        const std::string& chain_name) {
  Interpreter interpreter{ruleset, gamma, packet, trace};
  return interpreter.Run(chain, chain_name, depth_budget, false);
}

FilterDecision eval_firewall(const Ruleset& ruleset, const BoolMatcher& gamma,
                             const Packet& packet,
                             const std::string& start_chain,
                             EvalTrace* trace) {
  auto policy = ruleset.builtin_policies.find(start_chain);
  if (policy == ruleset.builtin_policies.end()) {
    throw WellFormednessError("chain " + start_chain +
                              " has no default policy");
  }
  // A loop-free call path visits each chain at most once.
  int budget = static_cast<int>(ruleset.chains.size()) + 1;
  Interpreter interpreter{ruleset, gamma, packet, trace};
  ChainOutcome outcome = interpreter.Run(ruleset.chain(start_chain),
                                         start_chain, budget, true);
  if (outcome == ChainOutcome::kAllow) return FilterDecision::kAllow;
  if (outcome == ChainOutcome::kDeny) return FilterDecision::kDeny;
  return policy->second == Policy::kAccept ? FilterDecision::kAllow
                                           : FilterDecision::kDeny;
}

FilterDecision eval_list(std::span<const Rule> rules, const BoolMatcher& gamma,
                         const Packet& packet, Policy fallback) {
  static const Ruleset kNoChains;
  Interpreter interpreter{kNoChains, gamma, packet, nullptr};
  ChainOutcome outcome = interpreter.Run(rules, "<list>", 0, true);
  if (outcome == ChainOutcome::kAllow) return FilterDecision::kAllow;
  if (outcome == ChainOutcome::kDeny) return FilterDecision::kDeny;
  return fallback == Policy::kAccept ? FilterDecision::kAllow
                                     : FilterDecision::kDeny;
}

LoopCheck check_no_loops(const Ruleset& ruleset,
                         const std::string& start_chain) {
  enum class Color { kWhite, kGrey, kBlack };
  std::map<std::string, Color> color;
  std::map<std::string, int> depth;
  std::vector<std::string> stack;
  LoopCheck result;

  std::function<bool(const std::string&)> visit =
      [&](const std::string& name) -> bool {
    color[name] = Color::kGrey;
    stack.push_back(name);
    int best = 0;
    auto it = ruleset.chains.find(name);
    if (it != ruleset.chains.end()) {
      for (const Rule& rule : it->second) {
        if (rule.action.kind() != Action::Kind::kCall) continue;
        const std::string& target = rule.action.target();
        if (!ruleset.chains.contains(target)) continue;
        Color c = color.contains(target) ? color[target] : Color::kWhite;
        if (c == Color::kGrey) {
          auto from = std::find(stack.begin(), stack.end(), target);
          result.cycle.assign(from, stack.end());
          result.cycle.push_back(target);
          return false;
        }
        if (c == Color::kWhite && !visit(target)) return false;
        best = std::max(best, depth[target] + 1);
      }
    }
    depth[name] = best;
    color[name] = Color::kBlack;
    stack.pop_back();
    return true;
  };

  if (!ruleset.chains.contains(start_chain)) {
    throw UndefinedChain("undefined chain " + start_chain);
  }
  result.ok = visit(start_chain);
  result.depth = result.ok ? depth[start_chain] : 0;
  return result;
}

std::uint8_t derivable_states(const Ruleset& ruleset, const BoolMatcher& gamma,
                              const Packet& packet, std::span<const Rule> chain,
                              FilterDecision start) {
  DerivationSearch search(ruleset, gamma, packet);
  return search.Derive(chain, start,
                       static_cast<int>(ruleset.chains.size()) + 1);
}

bool check_derivation(const Ruleset& ruleset, const BoolMatcher& gamma,
                      const Packet& packet, std::span<const Rule> chain,
                      FilterDecision start, FilterDecision final_state) {
  return (derivable_states(ruleset, gamma, packet, chain, start) &
          Bit(final_state)) != 0;
}

}  // namespace fwsimp
