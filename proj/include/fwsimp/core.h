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

#ifndef FWSIMP_CORE_H_
#define FWSIMP_CORE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fwsimp/cidr.h"

namespace fwsimp {

// ---------------------------------------------------------------------------
// Primitives

enum class ProtocolName : std::uint8_t { kAll, kTcp, kUdp, kIcmp };

struct SrcCidr {
  Cidr cidr;
  bool operator==(const SrcCidr&) const = default;
};

struct DstCidr {
  Cidr cidr;
  bool operator==(const DstCidr&) const = default;
};

// `-p all` is a primitive that matches everything; it is not the same as
// having no protocol primitive at all.
struct Protocol {
  ProtocolName name;
  bool operator==(const Protocol&) const = default;
};

// Any match the model does not interpret. `options` holds the original
// option text byte for byte so it can be written back unchanged. `module` is
// the name following a leading `-m`, or empty when the run did not start
// with one.
struct Extra {
  std::string module;
  std::string options;
  bool operator==(const Extra&) const = default;
};

using Primitive = std::variant<SrcCidr, DstCidr, Protocol, Extra>;

std::string_view ToString(ProtocolName name);
std::optional<ProtocolName> ParseProtocolName(std::string_view text);

// ---------------------------------------------------------------------------
// Match expressions: True | primitive | negation | binary conjunction.
// Immutable; copies share structure.

class MatchExpr {
 public:
  enum class Kind : std::uint8_t { kTrue, kPrim, kNot, kAnd };

  // True.
  MatchExpr();

  static MatchExpr True();
  static MatchExpr Prim(Primitive primitive);
  static MatchExpr Not(MatchExpr operand);
  static MatchExpr And(MatchExpr left, MatchExpr right);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::kTrue; }
  // Not(True).
  bool is_false() const;

  // Valid for kPrim only.
  const Primitive& primitive() const;
  // Valid for kNot only.
  MatchExpr operand() const;
  // Valid for kAnd only.
  MatchExpr left() const;
  MatchExpr right() const;

  // Number of nodes in the tree.
  std::size_t size() const;

  friend bool operator==(const MatchExpr& a, const MatchExpr& b);

  struct Node;

 private:
  explicit MatchExpr(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend struct NodeAccess;
};

struct MatchExpr::Node {
  Kind kind;
  Primitive primitive;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

// Folds a conjunct list right-associatively: [a, b, c] -> a AND (b AND c).
// The empty list is True.
MatchExpr ConjoinAll(const std::vector<MatchExpr>& conjuncts);

// Inverse of nested And: the leaves of the top-level conjunction tree in
// left-to-right order.
std::vector<MatchExpr> TopLevelConjuncts(const MatchExpr& m);

// ---------------------------------------------------------------------------
// Actions, rules, rulesets

class Action {
 public:
  enum class Kind : std::uint8_t {
    kAccept,
    kDrop,
    kReject,
    kLog,
    kEmpty,
    kCall,
    kReturn
  };

  static Action Accept() { return Action(Kind::kAccept); }
  static Action Drop() { return Action(Kind::kDrop); }
  static Action Reject() { return Action(Kind::kReject); }
  static Action Log() { return Action(Kind::kLog); }
  static Action Empty() { return Action(Kind::kEmpty); }
  static Action Return() { return Action(Kind::kReturn); }
  // Throws std::invalid_argument for an empty chain name.
  static Action Call(std::string chain);

  Kind kind() const { return kind_; }
  // Call target; empty for every other kind.
  const std::string& target() const { return target_; }

  bool operator==(const Action&) const = default;

 private:
  explicit Action(Kind kind) : kind_(kind) {}
  Kind kind_;
  std::string target_;
};

// The iptables target name: ACCEPT, DROP, ..., or the called chain.
std::string ToString(const Action& action);

struct Rule {
  MatchExpr match;
  Action action;
  bool operator==(const Rule&) const = default;
};

using Chain = std::vector<Rule>;

enum class Policy : std::uint8_t { kAccept, kDrop };

std::string_view ToString(Policy policy);
Action PolicyAction(Policy policy);

bool IsBuiltinChain(std::string_view name);

struct Ruleset {
  std::map<std::string, Chain> chains;
  std::map<std::string, Policy> builtin_policies;

  // Throws UndefinedChain.
  const Chain& chain(const std::string& name) const;
  bool operator==(const Ruleset&) const = default;
};

struct Violation {
  std::string chain;
  std::size_t rule_index;  // 0-based
  std::string target;
  std::string message;
};

// Empty iff every Call target exists and no Call targets a builtin chain.
std::vector<Violation> well_formed(const Ruleset& ruleset);

// ---------------------------------------------------------------------------
// Packets and matchers

enum class PacketProtocol : std::uint8_t { kTcp, kUdp, kIcmp, kOther };

inline constexpr PacketProtocol kAllPacketProtocols[] = {
    PacketProtocol::kTcp, PacketProtocol::kUdp, PacketProtocol::kIcmp,
    PacketProtocol::kOther};

std::string_view ToString(PacketProtocol protocol);
std::optional<PacketProtocol> ParsePacketProtocol(std::string_view text);

// Addresses are plain integers; in toy universes only the low `width` bits
// are used, matching the width of the CIDRs in play.
struct Packet {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  PacketProtocol protocol = PacketProtocol::kOther;
  bool operator==(const Packet&) const = default;
  auto operator<=>(const Packet&) const = default;
};

std::string ToString(const Packet& packet, int width = Cidr::kIpv4Width);

enum class FilterDecision : std::uint8_t { kUndecided, kAllow, kDeny };
std::string_view ToString(FilterDecision decision);

using BoolMatcher =
    std::function<bool(const Primitive& primitive, const Packet& packet)>;

// Source/destination membership and protocol equality. Extra primitives
// are not understood by this function; callers decide what they mean.
bool MatchesKnownPrimitive(const Primitive& primitive, const Packet& packet);

enum class ExtraPolicy : std::uint8_t { kMatch, kNoMatch, kError };

// Boolean matcher for the concrete packet model. Extra primitives resolve per
// `policy`; kError throws UnknownPrimitiveHit.
BoolMatcher DefaultBoolMatcher(ExtraPolicy policy = ExtraPolicy::kNoMatch);

bool match_eval_bool(const BoolMatcher& gamma, const MatchExpr& m,
                     const Packet& p);

enum class TernaryValue : std::uint8_t { kTrue, kFalse, kUnknown };
std::string_view ToString(TernaryValue value);

// Ternary primitive matcher. Unknown-ness is a static property of the
// primitive: whenever `unknown(x)` holds the result is kUnknown for every
// packet, otherwise `known` decides.
struct TernaryMatcher {
  std::function<bool(const Primitive&)> unknown;
  BoolMatcher known;

  TernaryValue operator()(const Primitive& x, const Packet& p) const;
};

// Understands source/destination CIDRs and the protocols TCP, UDP and `all`.
// Every Extra is unknown. ICMP protocol primitives are unknown unless
// `icmp_known` is set.
TernaryMatcher DefaultTernaryMatcher(bool icmp_known = false);

enum class Tactic : std::uint8_t { kInDoubtAllow, kInDoubtDeny };
std::string_view ToString(Tactic tactic);

}  // namespace fwsimp

#endif  // FWSIMP_CORE_H_
