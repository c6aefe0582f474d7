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

#include <gtest/gtest.h>

#include "fwsimp/errors.h"
#include "fwsimp/semantics.h"
#include "fwsimp/ternary.h"
#include "fwsimp/unfold.h"
#include "support/generators.h"

namespace fwsimp {
namespace {

Rule R(MatchExpr m, Action a) { return Rule{std::move(m), std::move(a)}; }
MatchExpr P(ProtocolName n) { return MatchExpr::Prim(Protocol{n}); }
MatchExpr X(const char* module) { return MatchExpr::Prim(Extra{module, ""}); }

// Decisions of `rules` and of the original firewall agree on every packet.
void ExpectSameDecisions(const Ruleset& rs, const std::vector<Rule>& rules,
                         const BoolMatcher& gamma,
                         const std::vector<Packet>& universe) {
  Policy policy = rs.builtin_policies.at("INPUT");
  for (const Packet& p : universe) {
    ASSERT_EQ(eval_firewall(rs, gamma, p, "INPUT"),
              eval_list(rules, gamma, p, policy))
        << ToString(p, 4);
  }
}

TEST(AddMatch, Examples) {
  EXPECT_TRUE(add_match(X("a"), {}).empty());
  MatchExpr not_icmp = MatchExpr::Not(P(ProtocolName::kIcmp));
  std::vector<Rule> expected{
      R(MatchExpr::And(P(ProtocolName::kTcp), not_icmp), Action::Accept())};
  EXPECT_EQ(add_match(not_icmp, {R(P(ProtocolName::kTcp), Action::Accept())}),
            expected);
}

TEST(ProcessReturn, Examples) {
  EXPECT_TRUE(process_return({}).empty());
  EXPECT_TRUE(process_return({R(X("a"), Action::Return())}).empty());

  Ruleset rs = testing::FixtureRuleset("synology.rules");
  const Chain& dos = rs.chain("DOS_PROTECT");
  std::vector<Rule> head(dos.begin(), dos.begin() + 2);
  std::vector<Rule> expected{R(
      MatchExpr::And(dos[1].match, MatchExpr::Not(dos[0].match)),
      Action::Drop())};
  EXPECT_EQ(process_return(head), expected);
}

TEST(ProcessReturn, LaterReturnsGuardOnlyTheirSuffix) {
  std::vector<Rule> rules{R(X("a"), Action::Accept()),
                          R(X("r"), Action::Return()),
                          R(X("b"), Action::Drop())};
  std::vector<Rule> expected{
      R(X("a"), Action::Accept()),
      R(MatchExpr::And(X("b"), MatchExpr::Not(X("r"))), Action::Drop())};
  EXPECT_EQ(process_return(rules), expected);
}

TEST(ProcessCall, Examples) {
  Ruleset rs = testing::FixtureRuleset("synology.rules");
  EXPECT_TRUE(process_call(rs, {}).empty());
  std::vector<Rule> flat{R(X("a"), Action::Accept()),
                         R(MatchExpr(), Action::Drop())};
  EXPECT_EQ(process_call(rs, flat), flat);

  const Chain& input = rs.chain("INPUT");
  std::vector<Rule> expected =
      add_match(MatchExpr(), process_return(rs.chain("DOS_PROTECT")));
  expected.insert(expected.end(), input.begin() + 1, input.end());
  EXPECT_EQ(process_call(rs, input), expected);
}

TEST(UnfoldCompletely, EmptyInput) {
  Ruleset rs;
  rs.chains["INPUT"];
  rs.builtin_policies["INPUT"] = Policy::kAccept;
  EXPECT_TRUE(unfold_completely(rs, "INPUT").empty());
}

TEST(UnfoldCompletely, SynologyRuleCounts) {
  Ruleset rs = testing::FixtureRuleset("synology.rules");
  std::vector<Rule> unfolded = unfold_completely(rs, "INPUT");
  EXPECT_EQ(optimize(unfolded).size(), 9u);
  // Three DOS_PROTECT drops survive the returns; the ESTABLISHED rule is one
  // of the six remaining INPUT rules.
  StripResult stripped = strip_established_prefix(unfolded);
  ASSERT_TRUE(stripped.removed);
  EXPECT_EQ(optimize(stripped.rules).size(), 8u);
}

TEST(UnfoldCompletely, NestedChainsReachFixpoint) {
  Ruleset rs;
  rs.builtin_policies["INPUT"] = Policy::kDrop;
  rs.chains["INPUT"] = {R(MatchExpr::Prim(SrcCidr{Cidr(0, 1, 4)}),
                          Action::Call("A")),
                        R(P(ProtocolName::kUdp), Action::Accept())};
  rs.chains["A"] = {R(P(ProtocolName::kIcmp), Action::Return()),
                    R(MatchExpr(), Action::Call("B"))};
  rs.chains["B"] = {R(MatchExpr::Prim(DstCidr{Cidr(8, 1, 4)}),
                      Action::Accept()),
                    R(MatchExpr(), Action::Call("C"))};
  rs.chains["C"] = {R(P(ProtocolName::kTcp), Action::Drop())};
  std::vector<Rule> unfolded = unfold_completely(rs, "INPUT");
  for (const Rule& r : unfolded) {
    EXPECT_NE(r.action.kind(), Action::Kind::kCall);
    EXPECT_NE(r.action.kind(), Action::Kind::kReturn);
  }
  EXPECT_EQ(process_call(rs, unfolded), unfolded);
  ExpectSameDecisions(rs, unfolded, DefaultBoolMatcher(),
                      testing::ToyUniverse(4));
}

TEST(UnfoldCompletely, RejectsCycles) {
  Ruleset rs = testing::FixtureRuleset("cyclic.rules");
  EXPECT_THROW(unfold_completely(rs, "INPUT"), LoopDetected);
  EXPECT_THROW(unfold_completely(rs, "MISSING"), UndefinedChain);
}

TEST(UnfoldCompletely, PreservesDecisionsOnRandomRulesets) {
  testing::Rng rng(2024);
  testing::RulesetOptions options;
  auto universe = testing::ToyUniverse(4);
  for (int i = 0; i < 60; ++i) {
    Ruleset rs = testing::RandomRuleset(rng, options);
    std::vector<Rule> unfolded = unfold_completely(rs, "INPUT");
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      ExpectSameDecisions(rs, unfolded, testing::HashOracle(seed * 31 + i, false),
                          universe);
    }
  }
}

TEST(Optimize, Examples) {
  std::vector<Rule> rules{
      R(MatchExpr::And(MatchExpr::True(), P(ProtocolName::kTcp)),
        Action::Reject())};
  EXPECT_EQ(optimize(rules),
            (std::vector<Rule>{R(P(ProtocolName::kTcp), Action::Drop())}));
  EXPECT_TRUE(optimize({R(X("a"), Action::Log()), R(X("a"), Action::Empty())})
                  .empty());
  EXPECT_EQ(optimize({R(MatchExpr::Prim(SrcCidr{Cidr()}), Action::Accept())}),
            (std::vector<Rule>{R(MatchExpr::True(), Action::Accept())}));
  EXPECT_EQ(optimize({R(MatchExpr::Not(MatchExpr::Not(X("a"))),
                        Action::Accept())}),
            (std::vector<Rule>{R(X("a"), Action::Accept())}));
  EXPECT_TRUE(optimize({R(MatchExpr::And(X("a"),
                                         MatchExpr::Not(MatchExpr::True())),
                          Action::Accept())})
                  .empty());
  EXPECT_THROW(optimize({R(MatchExpr(), Action::Call("X"))}),
               UnsupportedAction);
}

TEST(Optimize, IdempotentAndSound) {
  testing::Rng rng(99);
  testing::RulesetOptions options;
  auto universe = testing::ToyUniverse(4);
  for (int i = 0; i < 60; ++i) {
    Ruleset rs = testing::RandomRuleset(rng, options);
    std::vector<Rule> once = optimize(unfold_completely(rs, "INPUT"));
    ASSERT_EQ(optimize(once), once);
    ExpectSameDecisions(rs, once, testing::HashOracle(i, true), universe);
  }
}

}  // namespace
}  // namespace fwsimp
