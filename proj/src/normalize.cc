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

#include "fwsimp/normalize.h"

#include <limits>

#include "fwsimp/debug_format.h"
#include "fwsimp/errors.h"

namespace fwsimp {
namespace {

using Kind = MatchExpr::Kind;
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t SatMul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t SatAdd(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t CountNegated(const MatchExpr& inner);

std::uint64_t Count(const MatchExpr& m) {
  switch (m.kind()) {
    case Kind::kTrue:
    case Kind::kPrim:
      return 1;
    case Kind::kAnd:
      return SatMul(Count(m.left()), Count(m.right()));
    case Kind::kNot:
      return CountNegated(m.operand());
  }
  return 1;
}

std::uint64_t CountNegated(const MatchExpr& inner) {
  switch (inner.kind()) {
    case Kind::kTrue:
      return 0;
    case Kind::kPrim:
      return 1;
    case Kind::kNot:
      return Count(inner.operand());
    case Kind::kAnd:
      return SatAdd(CountNegated(inner.left()), CountNegated(inner.right()));
  }
  return 1;
}

void Normalize(const MatchExpr& m, std::vector<MatchExpr>& out);

void NormalizeNegated(const MatchExpr& inner, const MatchExpr& whole,
                      std::vector<MatchExpr>& out) {
  switch (inner.kind()) {
    case Kind::kTrue:
      return;
    case Kind::kPrim:
      out.push_back(whole);
      return;
    case Kind::kNot:
      Normalize(inner.operand(), out);
      return;
    case Kind::kAnd:
      Normalize(MatchExpr::Not(inner.left()), out);
      Normalize(MatchExpr::Not(inner.right()), out);
      return;
  }
}

void Normalize(const MatchExpr& m, std::vector<MatchExpr>& out) {
  switch (m.kind()) {
    case Kind::kTrue:
    case Kind::kPrim:
      out.push_back(m);
      return;
    case Kind::kNot:
      NormalizeNegated(m.operand(), m, out);
      return;
    case Kind::kAnd: {
      if (Count(m.left()) == 0 || Count(m.right()) == 0) return;
      std::vector<MatchExpr> left;
      Normalize(m.left(), left);
      std::vector<MatchExpr> right;
      Normalize(m.right(), right);
      out.reserve(out.size() + left.size() * right.size());
      for (const MatchExpr& x : left) {
        for (const MatchExpr& y : right) out.push_back(MatchExpr::And(x, y));
      }
      return;
    }
  }
}

}  // namespace

bool is_nnf(const MatchExpr& m) {
  switch (m.kind()) {
    case Kind::kTrue:
    case Kind::kPrim:
      return true;
    case Kind::kNot:
      return m.operand().kind() == Kind::kPrim;
    case Kind::kAnd:
      return is_nnf(m.left()) && is_nnf(m.right());
  }
  return false;
}

std::uint64_t nnf_count(const MatchExpr& m) { return Count(m); }

std::vector<MatchExpr> nnf_normalize(const MatchExpr& m, std::size_t limit) {
  // Sub-results are never larger than the final list once empty operands
  // short-circuit, so checking the final size bounds all of the work.
  std::uint64_t count = Count(m);
  if (count > limit) {
    throw BlowupLimitExceeded(
        "normalization would produce " +
        (count == kSaturated ? std::string("more than 2^64")
                             : std::to_string(count)) +
        " expressions, limit is " + std::to_string(limit));
  }
  std::vector<MatchExpr> out;
  out.reserve(static_cast<std::size_t>(count));
  Normalize(m, out);
  return out;
}

std::vector<Rule> normalize_rules(const std::vector<Rule>& rules,
                                  std::size_t limit) {
  std::vector<Rule> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Rule& rule = rules[i];
    if (rule.action.kind() != Action::Kind::kAccept &&
        rule.action.kind() != Action::Kind::kDrop) {
      throw UnsupportedAction("normalize_rules: rule " + std::to_string(i + 1) +
                              " has action " + ToDebugString(rule.action));
    }
    std::vector<MatchExpr> parts;
    try {
      parts = nnf_normalize(rule.match, limit);
    } catch (const BlowupLimitExceeded& e) {
      throw BlowupLimitExceeded(
          "rule " + std::to_string(i + 1) + ": " + e.what(), i);
    }
    for (MatchExpr& part : parts) out.push_back({std::move(part), rule.action});
  }
  return out;
}

}  // namespace fwsimp
