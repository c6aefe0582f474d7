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

#include "fwsimp/ternary.h"

#include "fwsimp/debug_format.h"
#include "fwsimp/errors.h"
#include "fwsimp/unfold.h"
#include "match_internal.h"

namespace fwsimp {
namespace {

using Kind = MatchExpr::Kind;

TernaryValue EvalNode(const TernaryMatcher& gt, const MatchExpr::Node* n,
                      const Packet& p) {
  switch (n->kind) {
    case Kind::kTrue:
      return TernaryValue::kTrue;
    case Kind::kPrim:
      return gt(n->primitive, p);
    case Kind::kNot:
      return ternary_not(EvalNode(gt, n->lhs.get(), p));
    case Kind::kAnd: {
      TernaryValue left = EvalNode(gt, n->lhs.get(), p);
      if (left == TernaryValue::kFalse) return left;
      return ternary_and(left, EvalNode(gt, n->rhs.get(), p));
    }
  }
  return TernaryValue::kUnknown;
}

void RequireAcceptOrDrop(const Action& action, const char* where) {
  if (action.kind() != Action::Kind::kAccept &&
      action.kind() != Action::Kind::kDrop) {
    throw UnsupportedAction(std::string(where) + ": " +
                            ToDebugString(action) + " is not Accept or Drop");
  }
}

// Does `tactic` apply a rule with `action` when its match is unknown?
bool UnknownApplies(Tactic tactic, const Action& action) {
  return tactic == Tactic::kInDoubtAllow
             ? action.kind() == Action::Kind::kAccept
             : action.kind() == Action::Kind::kDrop;
}

class UnknownRemover {
 public:
  UnknownRemover(const TernaryMatcher& gt, bool unknown_applies)
      : gt_(gt),
        resolved_(unknown_applies ? MatchExpr::True()
                                  : MatchExpr::Not(MatchExpr::True())) {}

  MatchExpr Run(const MatchExpr& m) const {
    switch (m.kind()) {
      case Kind::kTrue:
        return m;
      case Kind::kPrim:
        return gt_.unknown(m.primitive()) ? resolved_ : m;
      case Kind::kAnd: {
        MatchExpr left = Run(m.left());
        MatchExpr right = Run(m.right());
        if (left.is_false() || right.is_false()) {
          return MatchExpr::Not(MatchExpr::True());
        }
        if (left.is_true()) return right;
        if (right.is_true()) return left;
        return MatchExpr::And(std::move(left), std::move(right));
      }
      case Kind::kNot:
        return RunNot(m);
    }
    return m;
  }

 private:
  MatchExpr RunNot(const MatchExpr& m) const {
    MatchExpr inner = m.operand();
    switch (inner.kind()) {
      case Kind::kTrue:
        return m;
      case Kind::kPrim:
        // Not Unknown = Unknown, so a negated unknown resolves the same way.
        return gt_.unknown(inner.primitive()) ? resolved_ : m;
      case Kind::kNot:
        return Run(inner.operand());
      case Kind::kAnd: {
        MatchExpr a1 = Run(MatchExpr::Not(inner.left()));
        MatchExpr a2 = Run(MatchExpr::Not(inner.right()));
        if (a1.is_true() || a2.is_true()) return MatchExpr::True();
        if (a1.is_false()) return a2;
        if (a2.is_false()) return a1;
        return MatchExpr::Not(MatchExpr::And(MatchExpr::Not(std::move(a1)),
                                             MatchExpr::Not(std::move(a2))));
      }
    }
    return m;
  }

  const TernaryMatcher& gt_;
  MatchExpr resolved_;
};

bool IsEstablishedMatch(const MatchExpr& conjunct) {
  if (conjunct.kind() != Kind::kPrim) return false;
  const auto* extra = std::get_if<Extra>(&conjunct.primitive());
  if (extra == nullptr) return false;
  if (extra->module != "state" && extra->module != "conntrack") return false;
  return extra->options.find("ESTABLISHED") != std::string::npos &&
         extra->options.find('!') == std::string::npos;
}

bool IsEstablishedRule(const Rule& rule) {
  if (rule.action.kind() != Action::Kind::kAccept) return false;
  for (const MatchExpr& conjunct : TopLevelConjuncts(rule.match)) {
    if (IsEstablishedMatch(conjunct)) return true;
  }
  return false;
}

bool CannotAccept(const Action& action) {
  switch (action.kind()) {
    case Action::Kind::kDrop:
    case Action::Kind::kReject:
    case Action::Kind::kLog:
    case Action::Kind::kEmpty:
      return true;
    default:
      return false;
  }
}

}  // namespace

TernaryValue ternary_and(TernaryValue a, TernaryValue b) {
  if (a == TernaryValue::kFalse || b == TernaryValue::kFalse) {
    return TernaryValue::kFalse;
  }
  if (a == TernaryValue::kTrue) return b;
  if (b == TernaryValue::kTrue) return a;
  return TernaryValue::kUnknown;
}

TernaryValue ternary_not(TernaryValue a) {
  switch (a) {
    case TernaryValue::kTrue:
      return TernaryValue::kFalse;
    case TernaryValue::kFalse:
      return TernaryValue::kTrue;
    case TernaryValue::kUnknown:
      return TernaryValue::kUnknown;
  }
  return a;
}

TernaryValue ternary_eval(const TernaryMatcher& gt, const MatchExpr& m,
                          const Packet& p) {
  return EvalNode(gt, NodeAccess::Get(m), p);
}

bool approx_rule_matches(const TernaryMatcher& gt, Tactic tactic,
                         const MatchExpr& m, const Action& action,
                         const Packet& p) {
  RequireAcceptOrDrop(action, "approx_rule_matches");
  switch (ternary_eval(gt, m, p)) {
    case TernaryValue::kTrue:
      return true;
    case TernaryValue::kFalse:
      return false;
    case TernaryValue::kUnknown:
      return UnknownApplies(tactic, action);
  }
  return false;
}

FilterDecision eval_approx(std::span<const Rule> rules,
                           const TernaryMatcher& gt, Tactic tactic,
                           const Packet& p, FilterDecision fallback) {
  for (const Rule& rule : rules) {
    if (approx_rule_matches(gt, tactic, rule.match, rule.action, p)) {
      return rule.action.kind() == Action::Kind::kAccept
                 ? FilterDecision::kAllow
                 : FilterDecision::kDeny;
    }
  }
  return fallback;
}

std::vector<Packet> accepted_set(std::span<const Rule> rules,
                                 const TernaryMatcher& gt, Tactic tactic,
                                 std::span<const Packet> universe,
                                 FilterDecision fallback, std::size_t cap) {
  if (universe.size() > cap) {
    throw UniverseTooLarge("universe of " + std::to_string(universe.size()) +
                           " packets exceeds cap " + std::to_string(cap));
  }
  std::vector<Packet> accepted;
  for (const Packet& p : universe) {
    if (eval_approx(rules, gt, tactic, p, fallback) == FilterDecision::kAllow) {
      accepted.push_back(p);
    }
  }
  return accepted;
}

Rule process_unknowns(const TernaryMatcher& gt, Tactic tactic,
                      const Rule& rule) {
  RequireAcceptOrDrop(rule.action, "process_unknowns");
  UnknownRemover remover(gt, UnknownApplies(tactic, rule.action));
  return {remover.Run(rule.match), rule.action};
}

std::vector<Rule> simplify_ruleset(const std::vector<Rule>& rules,
                                   const TernaryMatcher& gt, Tactic tactic) {
  std::vector<Rule> processed;
  processed.reserve(rules.size());
  for (const Rule& rule : optimize(rules)) {
    processed.push_back(process_unknowns(gt, tactic, rule));
  }
  std::vector<Rule> out = optimize(processed);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].match.is_true()) {
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(i) + 1, out.end());
      break;
    }
  }
  return out;
}

StripResult strip_established_prefix(const std::vector<Rule>& rules) {
  StripResult result{rules, false, std::nullopt};
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (IsEstablishedRule(rules[i])) {
      result.rules.erase(result.rules.begin() + static_cast<long>(i));
      result.removed = true;
      return result;
    }
    if (!CannotAccept(rules[i].action)) break;
  }
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (IsEstablishedRule(rules[i])) {
      result.warning = "ESTABLISHED rule at position " + std::to_string(i + 1) +
                       " is not leading; left in place";
      break;
    }
  }
  return result;
}

}  // namespace fwsimp
