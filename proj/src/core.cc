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

#include "fwsimp/core.h"

#include <stdexcept>

#include "fwsimp/errors.h"
#include "match_internal.h"

namespace fwsimp {

namespace {

using Node = MatchExpr::Node;

const std::shared_ptr<const Node>& TrueNode() {
  static const auto* node = new std::shared_ptr<const Node>(
      std::make_shared<Node>(Node{MatchExpr::Kind::kTrue, {}, nullptr, nullptr}));
  return *node;
}

bool NodesEqual(const Node* a, const Node* b) {
  while (true) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case MatchExpr::Kind::kTrue:
        return true;
      case MatchExpr::Kind::kPrim:
        return a->primitive == b->primitive;
      case MatchExpr::Kind::kNot:
        a = a->lhs.get();
        b = b->lhs.get();
        continue;
      case MatchExpr::Kind::kAnd:
        if (!NodesEqual(a->lhs.get(), b->lhs.get())) return false;
        a = a->rhs.get();
        b = b->rhs.get();
        continue;
    }
  }
}

std::size_t NodeSize(const Node* n) {
  switch (n->kind) {
    case MatchExpr::Kind::kTrue:
    case MatchExpr::Kind::kPrim:
      return 1;
    case MatchExpr::Kind::kNot:
      return 1 + NodeSize(n->lhs.get());
    case MatchExpr::Kind::kAnd:
      return 1 + NodeSize(n->lhs.get()) + NodeSize(n->rhs.get());
  }
  return 1;
}

bool EvalBool(const BoolMatcher& gamma, const Node* n, const Packet& p) {
  switch (n->kind) {
    case MatchExpr::Kind::kTrue:
      return true;
    case MatchExpr::Kind::kPrim:
      return gamma(n->primitive, p);
    case MatchExpr::Kind::kNot:
      return !EvalBool(gamma, n->lhs.get(), p);
    case MatchExpr::Kind::kAnd:
      return EvalBool(gamma, n->lhs.get(), p) &&
             EvalBool(gamma, n->rhs.get(), p);
  }
  return false;
}

void CollectConjuncts(const MatchExpr& m, std::vector<MatchExpr>& out) {
  if (m.kind() == MatchExpr::Kind::kAnd) {
    CollectConjuncts(m.left(), out);
    CollectConjuncts(m.right(), out);
  } else {
    out.push_back(m);
  }
}

}  // namespace

std::string_view ToString(ProtocolName name) {
  switch (name) {
    case ProtocolName::kAll:
      return "all";
    case ProtocolName::kTcp:
      return "tcp";
    case ProtocolName::kUdp:
      return "udp";
    case ProtocolName::kIcmp:
      return "icmp";
  }
  return "?";
}

std::optional<ProtocolName> ParseProtocolName(std::string_view text) {
  if (text == "all") return ProtocolName::kAll;
  if (text == "tcp") return ProtocolName::kTcp;
  if (text == "udp") return ProtocolName::kUdp;
  if (text == "icmp") return ProtocolName::kIcmp;
  return std::nullopt;
}

MatchExpr::MatchExpr() : node_(TrueNode()) {}

MatchExpr MatchExpr::True() { return MatchExpr(); }

MatchExpr MatchExpr::Prim(Primitive primitive) {
  return MatchExpr(std::make_shared<Node>(
      Node{Kind::kPrim, std::move(primitive), nullptr, nullptr}));
}

MatchExpr MatchExpr::Not(MatchExpr operand) {
  return MatchExpr(std::make_shared<Node>(
      Node{Kind::kNot, {}, std::move(operand.node_), nullptr}));
}

MatchExpr MatchExpr::And(MatchExpr left, MatchExpr right) {
  return MatchExpr(std::make_shared<Node>(
      Node{Kind::kAnd, {}, std::move(left.node_), std::move(right.node_)}));
}

MatchExpr::Kind MatchExpr::kind() const { return node_->kind; }

bool MatchExpr::is_false() const {
  return node_->kind == Kind::kNot && node_->lhs->kind == Kind::kTrue;
}

const Primitive& MatchExpr::primitive() const {
  if (node_->kind != Kind::kPrim) {
    throw std::logic_error("MatchExpr::primitive on non-primitive");
  }
  return node_->primitive;
}

MatchExpr MatchExpr::operand() const {
  if (node_->kind != Kind::kNot) {
    throw std::logic_error("MatchExpr::operand on non-negation");
  }
  return MatchExpr(node_->lhs);
}

MatchExpr MatchExpr::left() const {
  if (node_->kind != Kind::kAnd) {
    throw std::logic_error("MatchExpr::left on non-conjunction");
  }
  return MatchExpr(node_->lhs);
}

MatchExpr MatchExpr::right() const {
  if (node_->kind != Kind::kAnd) {
    throw std::logic_error("MatchExpr::right on non-conjunction");
  }
  return MatchExpr(node_->rhs);
}

std::size_t MatchExpr::size() const { return NodeSize(node_.get()); }

bool operator==(const MatchExpr& a, const MatchExpr& b) {
  return NodesEqual(a.node_.get(), b.node_.get());
}

MatchExpr ConjoinAll(const std::vector<MatchExpr>& conjuncts) {
  if (conjuncts.empty()) return MatchExpr::True();
  MatchExpr result = conjuncts.back();
  for (auto it = conjuncts.rbegin() + 1; it != conjuncts.rend(); ++it) {
    result = MatchExpr::And(*it, result);
  }
  return result;
}

std::vector<MatchExpr> TopLevelConjuncts(const MatchExpr& m) {
  std::vector<MatchExpr> out;
  CollectConjuncts(m, out);
  return out;
}

Action Action::Call(std::string chain) {
  if (chain.empty()) throw std::invalid_argument("Call needs a chain name");
  Action action(Kind::kCall);
  action.target_ = std::move(chain);
  return action;
}

std::string ToString(const Action& action) {
  switch (action.kind()) {
    case Action::Kind::kAccept:
      return "ACCEPT";
    case Action::Kind::kDrop:
      return "DROP";
    case Action::Kind::kReject:
      return "REJECT";
    case Action::Kind::kLog:
      return "LOG";
    case Action::Kind::kEmpty:
      return "";
    case Action::Kind::kCall:
      return action.target();
    case Action::Kind::kReturn:
      return "RETURN";
  }
  return "";
}

std::string_view ToString(Policy policy) {
  return policy == Policy::kAccept ? "ACCEPT" : "DROP";
}

Action PolicyAction(Policy policy) {
  return policy == Policy::kAccept ? Action::Accept() : Action::Drop();
}

bool IsBuiltinChain(std::string_view name) {
  return name == "INPUT" || name == "FORWARD" || name == "OUTPUT";
}

const Chain& Ruleset::chain(const std::string& name) const {
  auto it = chains.find(name);
  if (it == chains.end()) throw UndefinedChain("undefined chain " + name);
  return it->second;
}

std::vector<Violation> well_formed(const Ruleset& ruleset) {
  std::vector<Violation> violations;
  for (const auto& [name, chain] : ruleset.chains) {
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const Action& action = chain[i].action;
      if (action.kind() != Action::Kind::kCall) continue;
      const std::string& target = action.target();
      if (IsBuiltinChain(target)) {
        violations.push_back({name, i, target,
                              "call to builtin chain " + target});
      } else if (!ruleset.chains.contains(target)) {
        violations.push_back({name, i, target,
                              "call to undefined chain " + target});
      }
    }
  }
  return violations;
}

std::string_view ToString(PacketProtocol protocol) {
  switch (protocol) {
    case PacketProtocol::kTcp:
      return "tcp";
    case PacketProtocol::kUdp:
      return "udp";
    case PacketProtocol::kIcmp:
      return "icmp";
    case PacketProtocol::kOther:
      return "other";
  }
  return "?";
}

std::optional<PacketProtocol> ParsePacketProtocol(std::string_view text) {
  for (PacketProtocol p : kAllPacketProtocols) {
    if (ToString(p) == text) return p;
  }
  return std::nullopt;
}

std::string ToString(const Packet& packet, int width) {
  auto address = [width](std::uint32_t a) {
    return width == Cidr::kIpv4Width ? FormatIpv4(a) : std::to_string(a);
  };
  return address(packet.src) + " -> " + address(packet.dst) + " " +
         std::string(ToString(packet.protocol));
}

std::string_view ToString(FilterDecision decision) {
  switch (decision) {
    case FilterDecision::kUndecided:
      return "Undecided";
    case FilterDecision::kAllow:
      return "Allow";
    case FilterDecision::kDeny:
      return "Deny";
  }
  return "?";
}

bool MatchesKnownPrimitive(const Primitive& primitive, const Packet& packet) {
  if (const auto* src = std::get_if<SrcCidr>(&primitive)) {
    return cidr_contains(src->cidr, packet.src);
  }
  if (const auto* dst = std::get_if<DstCidr>(&primitive)) {
    return cidr_contains(dst->cidr, packet.dst);
  }
  if (const auto* proto = std::get_if<Protocol>(&primitive)) {
    switch (proto->name) {
      case ProtocolName::kAll:
        return true;
      case ProtocolName::kTcp:
        return packet.protocol == PacketProtocol::kTcp;
      case ProtocolName::kUdp:
        return packet.protocol == PacketProtocol::kUdp;
      case ProtocolName::kIcmp:
        return packet.protocol == PacketProtocol::kIcmp;
    }
  }
  throw std::logic_error("MatchesKnownPrimitive: opaque primitive");
}

BoolMatcher DefaultBoolMatcher(ExtraPolicy policy) {
  return [policy](const Primitive& primitive, const Packet& packet) {
    if (const auto* extra = std::get_if<Extra>(&primitive)) {
      switch (policy) {
        case ExtraPolicy::kMatch:
          return true;
        case ExtraPolicy::kNoMatch:
          return false;
        case ExtraPolicy::kError:
          throw UnknownPrimitiveHit(
              "no Boolean interpretation for match '" +
              (extra->module.empty() ? extra->options
                                     : "-m " + extra->module + " " +
                                           extra->options) +
              "'");
      }
    }
    return MatchesKnownPrimitive(primitive, packet);
  };
}

bool match_eval_bool(const BoolMatcher& gamma, const MatchExpr& m,
                     const Packet& p) {
  return EvalBool(gamma, NodeAccess::Get(m), p);
}

std::string_view ToString(TernaryValue value) {
  switch (value) {
    case TernaryValue::kTrue:
      return "True";
    case TernaryValue::kFalse:
      return "False";
    case TernaryValue::kUnknown:
      return "Unknown";
  }
  return "?";
}

TernaryValue TernaryMatcher::operator()(const Primitive& x,
                                        const Packet& p) const {
  if (unknown(x)) return TernaryValue::kUnknown;
  return known(x, p) ? TernaryValue::kTrue : TernaryValue::kFalse;
}

TernaryMatcher DefaultTernaryMatcher(bool icmp_known) {
  TernaryMatcher matcher;
  matcher.unknown = [icmp_known](const Primitive& x) {
    if (std::holds_alternative<Extra>(x)) return true;
    if (const auto* proto = std::get_if<Protocol>(&x)) {
      return !icmp_known && proto->name == ProtocolName::kIcmp;
    }
    return false;
  };
  matcher.known = [](const Primitive& x, const Packet& p) {
    return MatchesKnownPrimitive(x, p);
  };
  return matcher;
}

std::string_view ToString(Tactic tactic) {
  return tactic == Tactic::kInDoubtAllow ? "in-doubt-allow" : "in-doubt-deny";
}

}  // namespace fwsimp
