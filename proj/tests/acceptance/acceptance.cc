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

// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <bitset>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fwsimp/cli.h"
#include "fwsimp/errors.h"
#include "fwsimp/ipspace.h"
#include "fwsimp/iptables_save.h"
#include "fwsimp/normalize.h"
#include "fwsimp/semantics.h"
#include "fwsimp/ternary.h"
#include "fwsimp/unfold.h"
#include "support/generators.h"

namespace fwsimp {
namespace {

using testing::Rng;

struct Verdict {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string name;
  double limit_seconds;  // 0: no runtime bound
  std::function<Verdict()> check;
};

std::vector<Rule> SynologyFlat(bool strip) {
  Ruleset rs = testing::FixtureRuleset("synology.rules");
  std::vector<Rule> rules = unfold_completely(rs, "INPUT");
  if (strip) rules = strip_established_prefix(rules).rules;
  return optimize(rules);
}

Verdict SynologyCounts() {
  std::vector<Rule> flat = SynologyFlat(true);
  std::size_t normalized = normalize_rules(flat).size();
  std::ostringstream s;
  s << "established rule stripped: unfolded " << flat.size()
    << " (want 9), normalized " << normalized << " (want 20)";
  return {flat.size() == 9 && normalized == 20, s.str()};
}

Verdict UpperClosure() {
  std::vector<Rule> got = compress_rules(simplify_ruleset(
      SynologyFlat(true), DefaultTernaryMatcher(), Tactic::kInDoubtAllow));
  std::vector<Rule> want{
      Rule{MatchExpr::Prim(SrcCidr{*Cidr::Parse("192.168.0.0/16")}),
           Action::Accept()},
      Rule{MatchExpr::True(), Action::Drop()}};
  return {got == want, std::to_string(got.size()) + " rules"};
}

Verdict LowerClosure() {
  Rng rng(20240101);
  std::vector<Packet> universe;
  for (int i = 0; i < 10000; ++i) {
    universe.push_back(Packet{static_cast<std::uint32_t>(rng()),
                              static_cast<std::uint32_t>(rng()),
                              kAllPacketProtocols[rng() % 4]});
  }
  auto accepted = accepted_set(SynologyFlat(true), DefaultTernaryMatcher(),
                               Tactic::kInDoubtDeny, universe,
                               FilterDecision::kAllow);
  return {accepted.empty(),
          std::to_string(accepted.size()) + " of 10000 packets accepted"};
}

Verdict UnfoldingPreservesDecisions() {
  Rng rng(1);
  testing::RulesetOptions options;
  auto universe = testing::ToyUniverse(4);
  std::size_t mismatches = 0, checks = 0;
  for (int i = 0; i < 500; ++i) {
    Ruleset rs = testing::RandomRuleset(rng, options);
    if (check_no_loops(rs, "INPUT").depth > 3) return {false, "generator"};
    std::vector<Rule> flat = unfold_completely(rs, "INPUT");
    Policy policy = rs.builtin_policies.at("INPUT");
    for (int k = 0; k < 20; ++k) {
      BoolMatcher gamma = testing::HashOracle(Rng(i * 20 + k)(), k % 2 == 0);
      for (const Packet& p : universe) {
        ++checks;
        mismatches += eval_firewall(rs, gamma, p, "INPUT") !=
                      eval_list(flat, gamma, p, policy);
      }
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in " +
                               std::to_string(checks) + " evaluations"};
}

Verdict Determinism() {
  Rng rng(2);
  testing::RulesetOptions options;
  options.match.width = 1;
  options.max_rules = 6;
  options.top_level_return = false;
  auto universe = testing::ToyUniverse(1);
  std::size_t violations = 0;
  for (int i = 0; i < 200; ++i) {
    Ruleset rs = testing::RandomRuleset(rng, options);
    BoolMatcher gamma = testing::HashOracle(Rng(i)(), i % 2 == 0);
    const Chain& chain = rs.chain("INPUT");
    for (const Packet& p : universe) {
      std::uint8_t states = derivable_states(rs, gamma, p, chain,
                                             FilterDecision::kUndecided);
      FilterDecision t = ToDecision(eval_chain(rs, gamma, p, chain, 4));
      if (std::bitset<8>(states).count() != 1 ||
          states != (1u << static_cast<int>(t))) {
        ++violations;
      }
    }
  }
  return {violations == 0, std::to_string(violations) + " violations"};
}

// Shared family for the closure and unknown-removal criteria.
struct ClosureCase {
  std::vector<Rule> rules;
  testing::Classified classified;
};

std::vector<ClosureCase> ClosureFamily() {
  Rng rng(3);
  testing::MatchOptions options;
  std::vector<ClosureCase> family;
  for (int i = 0; i < 500; ++i) {
    family.push_back({testing::RandomSimpleRules(rng, options, 8),
                      testing::RandomClassification(Rng(1000 + i)(), 35,
                                                    i % 2 == 0)});
  }
  return family;
}

Verdict ClosureInclusion() {
  auto universe = testing::ToyUniverse(4);
  std::size_t violations = 0;
  for (const ClosureCase& c : ClosureFamily()) {
    for (const Packet& p : universe) {
      auto allowed = [&](FilterDecision d) {
        return d == FilterDecision::kAllow;
      };
      bool exact = allowed(eval_list(c.rules, c.classified.exact, p,
                                     Policy::kDrop));
      bool lower = allowed(eval_approx(c.rules, c.classified.ternary,
                                       Tactic::kInDoubtDeny, p,
                                       FilterDecision::kDeny));
      bool upper = allowed(eval_approx(c.rules, c.classified.ternary,
                                       Tactic::kInDoubtAllow, p,
                                       FilterDecision::kDeny));
      violations += (lower && !exact) || (exact && !upper);
    }
  }
  return {violations == 0, std::to_string(violations) + " violations"};
}

bool MentionsUnknown(const TernaryMatcher& gt, const MatchExpr& m) {
  switch (m.kind()) {
    case MatchExpr::Kind::kTrue:
      return false;
    case MatchExpr::Kind::kPrim:
      return gt.unknown(m.primitive());
    case MatchExpr::Kind::kNot:
      return MentionsUnknown(gt, m.operand());
    case MatchExpr::Kind::kAnd:
      return MentionsUnknown(gt, m.left()) || MentionsUnknown(gt, m.right());
  }
  return false;
}

Verdict UnknownRemoval() {
  auto universe = testing::ToyUniverse(4);
  std::size_t decision_changes = 0, leftovers = 0;
  for (const ClosureCase& c : ClosureFamily()) {
    const TernaryMatcher& gt = c.classified.ternary;
    for (Tactic t : {Tactic::kInDoubtAllow, Tactic::kInDoubtDeny}) {
      std::vector<Rule> processed;
      for (const Rule& r : c.rules) {
        processed.push_back(process_unknowns(gt, t, r));
        leftovers += MentionsUnknown(gt, processed.back().match);
      }
      for (const Packet& p : universe) {
        decision_changes +=
            eval_approx(c.rules, gt, t, p, FilterDecision::kDeny) !=
            eval_approx(processed, gt, t, p, FilterDecision::kDeny);
      }
    }
  }
  return {decision_changes == 0 && leftovers == 0,
          std::to_string(decision_changes) + " decision changes, " +
              std::to_string(leftovers) + " rules with unknowns left"};
}

Verdict Normalization() {
  Rng rng(4);
  testing::MatchOptions options;
  options.max_depth = 8;
  auto universe = testing::ToyUniverse(4);
  std::size_t not_nnf = 0, decision_changes = 0, law_breaks = 0;
  int accepted = 0, drawn = 0;
  while (accepted < 500) {
    ++drawn;
    MatchExpr m = testing::RandomMatch(rng, options);
    if (nnf_count(m) > 256) continue;
    ++accepted;
    std::vector<MatchExpr> n = nnf_normalize(m);
    for (const MatchExpr& e : n) not_nnf += !is_nnf(e);

    law_breaks += n.size() != nnf_count(m);
    if (m.kind() == MatchExpr::Kind::kAnd) {
      law_breaks += n.size() != nnf_normalize(m.left()).size() *
                                    nnf_normalize(m.right()).size();
    } else if (m.kind() == MatchExpr::Kind::kNot &&
               m.operand().kind() == MatchExpr::Kind::kAnd) {
      MatchExpr inner = m.operand();
      law_breaks += n.size() !=
                    nnf_normalize(MatchExpr::Not(inner.left())).size() +
                        nnf_normalize(MatchExpr::Not(inner.right())).size();
    }

    Action a = accepted % 2 ? Action::Accept() : Action::Drop();
    Policy fallback = accepted % 2 ? Policy::kDrop : Policy::kAccept;
    FilterDecision fallback_decision = accepted % 2 ? FilterDecision::kDeny
                                                    : FilterDecision::kAllow;
    std::vector<Rule> before{Rule{m, a}};
    std::vector<Rule> after = normalize_rules(before);
    testing::Classified c =
        testing::RandomClassification(Rng(accepted)(), 30, accepted % 3 != 0);
    for (const Packet& p : universe) {
      decision_changes += eval_list(before, c.exact, p, fallback) !=
                          eval_list(after, c.exact, p, fallback);
      for (Tactic t : {Tactic::kInDoubtAllow, Tactic::kInDoubtDeny}) {
        decision_changes +=
            eval_approx(before, c.ternary, t, p, fallback_decision) !=
            eval_approx(after, c.ternary, t, p, fallback_decision);
      }
    }
  }
  std::ostringstream s;
  s << not_nnf << " non-NNF outputs, " << decision_changes
    << " decision changes, " << law_breaks << " count-law breaks ("
    << accepted << " of " << drawn << " expressions within size bound)";
  return {not_nnf == 0 && decision_changes == 0 && law_breaks == 0, s.str()};
}

Verdict CidrOracle() {
  constexpr int kWidth = 8;
  std::vector<Cidr> all;
  for (int len = 0; len <= kWidth; ++len) {
    for (std::uint32_t b = 0; b < (1u << kWidth); b += 1u << (kWidth - len)) {
      all.emplace_back(b, len, kWidth);
    }
  }
  std::vector<std::bitset<256>> sets;
  for (const Cidr& c : all) {
    std::bitset<256> s;
    std::uint32_t size = 1u << (kWidth - c.prefix_len());
    for (std::uint32_t k = 0; k < size; ++k) s.set(c.base() + k);
    sets.push_back(s);
  }
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      std::bitset<256> want = sets[i] & sets[j];
      auto got = cidr_intersect(all[i], all[j]);
      std::bitset<256> got_set;
      if (got) {
        for (std::uint32_t ip = 0; ip < 256; ++ip) {
          if (cidr_contains(*got, ip)) got_set.set(ip);
        }
      }
      mismatches += got_set != want;
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over " +
                               std::to_string(all.size() * all.size()) +
                               " pairs"};
}

Verdict RoundTrip() {
  std::size_t failures = 0;
  std::string names;
  for (const char* name : {"synology.rules", "cyclic.rules", "ssh.rules",
                           "varied.rules", "empty_input.rules"}) {
    Ruleset once = testing::FixtureRuleset(name);
    Ruleset twice = parse_save(emit_save(once)).ruleset;
    if (!(once == twice)) {
      ++failures;
      names += std::string(" ") + name;
    }
  }
  return {failures == 0, failures == 0 ? "5 fixtures" : "failed:" + names};
}

// INPUT with 2000 rules and ten 100-rule user chains it calls.
std::string SyntheticRuleset() {
  Rng rng(3000);
  auto cidr = [&] {
    int len = 8 + static_cast<int>(rng() % 25);
    return Cidr(static_cast<std::uint32_t>(rng()), len).ToString();
  };
  const char* protos[] = {"tcp", "udp", "icmp"};
  auto rule = [&](bool allow_call, int chain_index) {
    std::string r = " -s " + cidr();
    if (rng() % 3 == 0) r += std::string(rng() % 4 ? " -d " : " ! -d ") + cidr();
    int proto = static_cast<int>(rng() % 4);
    if (proto < 3) {
      r += std::string(" -p ") + protos[proto];
      if (proto < 2 && rng() % 2) {
        r += " -m multiport --dports " + std::to_string(rng() % 1024) + "," +
             std::to_string(rng() % 65536);
      }
    }
    if (rng() % 10 == 0) r += " -m state --state NEW";
    if (allow_call && rng() % 100 == 0) {
      r += " -j U" + std::to_string(chain_index);
    } else {
      r += rng() % 2 ? " -j ACCEPT" : " -j DROP";
    }
    return r;
  };
  std::ostringstream out;
  out << "*filter\n:INPUT DROP [0:0]\n:FORWARD DROP [0:0]\n"
         ":OUTPUT ACCEPT [0:0]\n";
  for (int c = 0; c < 10; ++c) out << ":U" << c << " - [0:0]\n";
  for (int i = 0; i < 2000; ++i) {
    out << "-A INPUT" << rule(true, static_cast<int>(rng() % 10)) << '\n';
  }
  for (int c = 0; c < 10; ++c) {
    for (int i = 0; i < 100; ++i) {
      if (i % 40 == 20) {
        out << "-A U" << c << " -p tcp -m limit --limit " << i
            << "/sec -j RETURN\n";
      } else {
        out << "-A U" << c << rule(false, 0) << '\n';
      }
    }
  }
  out << "COMMIT\n";
  return out.str();
}

Verdict SyntheticSmoke() {
  auto path = std::filesystem::temp_directory_path() / "fwsimp_synthetic.rules";
  std::ofstream(path) << SyntheticRuleset();
  std::string p = path.string();
  const char* argv[] = {"fwsimp", "simplify", p.c_str()};
  std::ostringstream out, err;
  int code = run_cli(3, argv, out, err);
  std::string stages = err.str();
  for (char& ch : stages) {
    if (ch == '\n') ch = ' ';
  }
  return {code == kExitOk, "exit " + std::to_string(code) + "; " + stages};
}

}  // namespace
}  // namespace fwsimp

int main() {
  using namespace fwsimp;
  const std::vector<Criterion> criteria = {
      {"1", "synology pipeline rule counts", 1, SynologyCounts},
      {"2", "upper closure of the synology ruleset", 1, UpperClosure},
      {"3", "lower closure of the synology ruleset is empty", 5, LowerClosure},
      {"4", "unfolding preserves decisions", 60, UnfoldingPreservesDecisions},
      {"5", "big-step semantics is deterministic", 60, Determinism},
      {"6", "closures bracket the exact semantics", 60, ClosureInclusion},
      {"7", "unknown removal keeps approximate decisions", 0, UnknownRemoval},
      {"8", "normalization yields equivalent NNF rules", 0, Normalization},
      {"9", "cidr intersection matches address sets at width 8", 10,
       CidrOracle},
      {"10", "save format round-trip on fixtures", 0, RoundTrip},
      {"11", "3000-rule synthetic ruleset simplifies", 30, SyntheticSmoke},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    bool in_time = c.limit_seconds == 0 || seconds < c.limit_seconds;
    bool pass = v.pass && in_time;
    failed += !pass;
    std::printf("%s criterion %-2s %s: %s [%.2f s", pass ? "PASS" : "FAIL",
                c.id.c_str(), c.name.c_str(), v.detail.c_str(), seconds);
    if (c.limit_seconds > 0) std::printf(", limit %.0f s", c.limit_seconds);
    std::printf("]\n");
  }

  // Reference point: the same counts taken before the ESTABLISHED rule is
  // removed. Informational only.
  std::vector<Rule> flat = SynologyFlat(false);
  std::printf("INFO without stripping: unfolded %zu, normalized %zu\n",
              flat.size(), normalize_rules(flat).size());

  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
