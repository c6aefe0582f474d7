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

#include "fwsimp/ipspace.h"

#include <algorithm>

#include "fwsimp/debug_format.h"
#include "fwsimp/errors.h"
#include "fwsimp/normalize.h"

namespace fwsimp {

std::optional<Rule> compress_rule(const Rule& rule) {
  if (rule.action.kind() != Action::Kind::kAccept &&
      rule.action.kind() != Action::Kind::kDrop) {
    throw UnsupportedAction("compress_rule: " + ToDebugString(rule.action));
  }
  if (!is_nnf(rule.match)) {
    throw NotNnf("compress_rule: match is not in NNF: " +
                 ToDebugString(rule.match));
  }

  std::optional<Cidr> src;
  std::optional<Cidr> dst;
  std::optional<ProtocolName> proto;
  std::vector<ProtocolName> negated_protos;
  std::vector<MatchExpr> rest;

  for (const MatchExpr& conjunct : TopLevelConjuncts(rule.match)) {
    if (conjunct.is_true()) continue;
    if (conjunct.kind() == MatchExpr::Kind::kPrim) {
      const Primitive& x = conjunct.primitive();
      if (const auto* s = std::get_if<SrcCidr>(&x)) {
        src = src ? cidr_intersect(*src, s->cidr) : s->cidr;
        if (!src) return std::nullopt;
        continue;
      }
      if (const auto* d = std::get_if<DstCidr>(&x)) {
        dst = dst ? cidr_intersect(*dst, d->cidr) : d->cidr;
        if (!dst) return std::nullopt;
        continue;
      }
      if (const auto* p = std::get_if<Protocol>(&x)) {
        if (!proto || *proto == ProtocolName::kAll) {
          proto = p->name;
        } else if (p->name != ProtocolName::kAll && p->name != *proto) {
          return std::nullopt;
        }
        continue;
      }
    } else if (conjunct.kind() == MatchExpr::Kind::kNot) {
      if (const auto* p = std::get_if<Protocol>(&conjunct.operand().primitive())) {
        if (p->name == ProtocolName::kAll) return std::nullopt;
        if (std::find(negated_protos.begin(), negated_protos.end(), p->name) ==
            negated_protos.end()) {
          negated_protos.push_back(p->name);
        }
        continue;
      }
    }
    rest.push_back(conjunct);
  }

  std::vector<MatchExpr> out;
  if (src) out.push_back(MatchExpr::Prim(SrcCidr{*src}));
  if (dst) out.push_back(MatchExpr::Prim(DstCidr{*dst}));
  bool concrete = proto && *proto != ProtocolName::kAll;
  if (proto) out.push_back(MatchExpr::Prim(Protocol{*proto}));
  for (ProtocolName negated : negated_protos) {
    if (concrete) {
      // tcp AND NOT tcp never matches; tcp AND NOT udp is just tcp.
      if (negated == *proto) return std::nullopt;
      continue;
    }
    out.push_back(MatchExpr::Not(MatchExpr::Prim(Protocol{negated})));
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return Rule{ConjoinAll(out), rule.action};
}

std::vector<Rule> compress_rules(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  out.reserve(rules.size());
  for (const Rule& rule : rules) {
    if (auto compressed = compress_rule(rule)) {
      out.push_back(std::move(*compressed));
    }
  }
  return out;
}

}  // namespace fwsimp
