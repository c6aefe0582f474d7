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

#include "fwsimp/unfold.h"

#include "fwsimp/errors.h"
#include "fwsimp/semantics.h"

namespace fwsimp {
namespace {

bool HasCallOrReturn(const std::vector<Rule>& rules) {
  for (const Rule& r : rules) {
    if (r.action.kind() == Action::Kind::kCall ||
        r.action.kind() == Action::Kind::kReturn) {
      return true;
    }
  }
  return false;
}

bool IsUniverse(const Primitive& x) {
  if (const auto* src = std::get_if<SrcCidr>(&x)) return src->cidr.is_universe();
  if (const auto* dst = std::get_if<DstCidr>(&x)) return dst->cidr.is_universe();
  return false;
}

}  // namespace

std::vector<Rule> add_match(const MatchExpr& extra,
                            const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  out.reserve(rules.size());
  for (const Rule& r : rules) {
    out.push_back({MatchExpr::And(r.match, extra), r.action});
  }
  return out;
}

std::vector<Rule> process_return(const std::vector<Rule>& rules) {
  // Right to left so that each Return wraps exactly the processed suffix.
  std::vector<Rule> suffix;
  for (auto it = rules.rbegin(); it != rules.rend(); ++it) {
    if (it->action.kind() == Action::Kind::kReturn) {
      suffix = add_match(MatchExpr::Not(it->match), suffix);
    } else {
      suffix.insert(suffix.begin(), *it);
    }
  }
  return suffix;
}

std::vector<Rule> process_call(const Ruleset& ruleset,
                               const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  for (const Rule& r : rules) {
    if (r.action.kind() == Action::Kind::kCall) {
      std::vector<Rule> inlined =
          add_match(r.match, process_return(ruleset.chain(r.action.target())));
      out.insert(out.end(), inlined.begin(), inlined.end());
    } else {
      out.push_back(r);
    }
  }
  return out;
}

std::vector<Rule> unfold_completely(const Ruleset& ruleset,
                                    const std::string& start_chain) {
  LoopCheck loops = check_no_loops(ruleset, start_chain);
  if (!loops.ok) {
    std::string cycle;
    for (const std::string& c : loops.cycle) {
      cycle += cycle.empty() ? c : " -> " + c;
    }
    throw LoopDetected("call loop: " + cycle);
  }
  std::vector<Rule> rules = process_return(ruleset.chain(start_chain));
  for (int i = 0; i < loops.depth; ++i) rules = process_call(ruleset, rules);
  if (HasCallOrReturn(rules)) {
    throw NotConverged("calls remain after " + std::to_string(loops.depth) +
                       " unfolding steps");
  }
  return rules;
}

MatchExpr simplify_match(const MatchExpr& m) {
  switch (m.kind()) {
    case MatchExpr::Kind::kTrue:
      return m;
    case MatchExpr::Kind::kPrim:
      return IsUniverse(m.primitive()) ? MatchExpr::True() : m;
    case MatchExpr::Kind::kNot: {
      MatchExpr inner = simplify_match(m.operand());
      if (inner.kind() == MatchExpr::Kind::kNot) return inner.operand();
      return MatchExpr::Not(std::move(inner));
    }
    case MatchExpr::Kind::kAnd: {
      MatchExpr left = simplify_match(m.left());
      MatchExpr right = simplify_match(m.right());
      if (left.is_true()) return right;
      if (right.is_true()) return left;
      return MatchExpr::And(std::move(left), std::move(right));
    }
  }
  return m;
}

std::vector<Rule> optimize(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  out.reserve(rules.size());
  for (const Rule& r : rules) {
    Action action = r.action;
    switch (action.kind()) {
      case Action::Kind::kCall:
      case Action::Kind::kReturn:
        throw UnsupportedAction("optimize: " + ToString(action) +
                                " in a list that is not unfolded");
      case Action::Kind::kReject:
        action = Action::Drop();
        break;
      case Action::Kind::kLog:
      case Action::Kind::kEmpty:
        continue;
      default:
        break;
    }
    MatchExpr match = simplify_match(r.match);
    bool never = false;
    for (const MatchExpr& conjunct : TopLevelConjuncts(match)) {
      if (conjunct.is_false()) {
        never = true;
        break;
      }
    }
    if (!never) out.push_back({std::move(match), std::move(action)});
  }
  return out;
}

}  // namespace fwsimp
