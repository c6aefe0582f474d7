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

#include "fwsimp/cli.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fwsimp/core.h"
#include "fwsimp/errors.h"
#include "fwsimp/ipspace.h"
#include "fwsimp/iptables_save.h"
#include "fwsimp/json_dump.h"
#include "fwsimp/normalize.h"
#include "fwsimp/semantics.h"
#include "fwsimp/ternary.h"
#include "fwsimp/unfold.h"

namespace fwsimp {
namespace {

class ReadFailure : public Error {
 public:
  using Error::Error;
};

ParseResult Load(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReadFailure("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ReadFailure("cannot read " + path);
  ParseResult parsed = parse_save(buffer.str());
  for (const std::string& w : parsed.warnings) {
    err << path << ": warning: " << w << '\n';
  }
  return parsed;
}

Policy StartPolicy(const Ruleset& ruleset, const std::string& chain) {
  ruleset.chain(chain);
  auto it = ruleset.builtin_policies.find(chain);
  if (it == ruleset.builtin_policies.end()) {
    throw WellFormednessError("chain " + chain +
                              " has no default policy; start from a builtin "
                              "chain");
  }
  return it->second;
}

std::string Join(const std::vector<std::string>& names) {
  std::string s;
  for (const std::string& n : names) {
    if (!s.empty()) s += " -> ";
    s += n;
  }
  return s;
}

ExtraPolicy ParseExtraPolicy(const std::string& text) {
  if (text == "match") return ExtraPolicy::kMatch;
  if (text == "error") return ExtraPolicy::kError;
  return ExtraPolicy::kNoMatch;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  std::string path;
  std::string chain = "INPUT";
};

int Check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
  Ruleset ruleset;
  try {
    ruleset = Load(args.path, err).ruleset;
  } catch (const WellFormednessError& e) {
    out << "violation: " << e.what() << '\n';
    return kExitViolation;
  }
  bool clean = true;
  for (const Violation& v : well_formed(ruleset)) {
    out << "violation: " << v.chain << " rule " << v.rule_index + 1 << ": "
        << v.message << '\n';
    clean = false;
  }
  std::set<std::vector<std::string>> cycles;
  for (const auto& [name, chain] : ruleset.chains) {
    LoopCheck loops = check_no_loops(ruleset, name);
    if (loops.ok) continue;
    // Report each cycle once, rotated to start at its smallest chain.
    std::vector<std::string> ring(loops.cycle.begin(), loops.cycle.end() - 1);
    std::rotate(ring.begin(), std::min_element(ring.begin(), ring.end()),
                ring.end());
    ring.push_back(ring.front());
    cycles.insert(ring);
  }
  for (const auto& ring : cycles) {
    out << "cycle: " << Join(ring) << '\n';
    clean = false;
  }
  if (!ruleset.chains.contains(args.chain)) {
    out << "violation: chain " << args.chain << " is not declared\n";
    clean = false;
  } else if (cycles.empty()) {
    out << "call depth " << check_no_loops(ruleset, args.chain).depth << '\n';
  }
  out << (clean ? "ok\n" : "not ok\n");
  return clean ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------
// simplify

struct SimplifyArgs {
  std::string path;
  std::string chain = "INPUT";
  std::string tactic = "allow";
  bool strip_established = false;
  bool no_normalize = false;
  std::size_t blowup_limit = 0;  // 0: environment or default
  bool icmp_known = false;
  std::string format = "save";
  std::string out_path;
};

std::size_t BlowupLimit(const SimplifyArgs& args) {
  if (args.blowup_limit != 0) return args.blowup_limit;
  if (const char* env = std::getenv("FWSIMP_BLOWUP_LIMIT")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultBlowupLimit;
}

int Simplify(const SimplifyArgs& args, std::ostream& out, std::ostream& err) {
  Ruleset ruleset = Load(args.path, err).ruleset;
  Policy policy = StartPolicy(ruleset, args.chain);
  LoopCheck loops = check_no_loops(ruleset, args.chain);
  if (!loops.ok) throw LoopDetected("call cycle " + Join(loops.cycle));

  std::vector<Rule> rules = unfold_completely(ruleset, args.chain);
  if (args.strip_established) {
    StripResult stripped = strip_established_prefix(rules);
    if (stripped.warning) err << "warning: " << *stripped.warning << '\n';
    rules = std::move(stripped.rules);
  }
  rules = optimize(rules);
  err << "unfolded: " << rules.size() << '\n';

  if (!args.no_normalize) {
    rules = normalize_rules(rules, BlowupLimit(args));
    err << "normalized: " << rules.size() << '\n';
  }

  Tactic tactic =
      args.tactic == "deny" ? Tactic::kInDoubtDeny : Tactic::kInDoubtAllow;
  rules = simplify_ruleset(rules, DefaultTernaryMatcher(args.icmp_known),
                           tactic);
  err << "closure: " << rules.size() << '\n';

  std::vector<Rule> compressed;
  for (const Rule& rule : rules) {
    if (!is_nnf(rule.match)) {
      compressed.push_back(rule);
    } else if (auto c = compress_rule(rule)) {
      compressed.push_back(std::move(*c));
    }
  }
  rules = std::move(compressed);
  err << "compressed: " << rules.size() << '\n';

  std::string text = args.format == "json"
                         ? emit_json(rules)
                         : emit_save(rules, args.chain, policy);
  if (args.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(args.out_path, std::ios::binary);
    file << text;
    if (!file) throw ReadFailure("cannot write " + args.out_path);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string path;
  std::string chain = "INPUT";
  std::string src = "0.0.0.0";
  std::string dst = "0.0.0.0";
  std::string proto = "tcp";
  std::string assume_unknown = "nomatch";
};

int Eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  Ruleset ruleset = Load(args.path, err).ruleset;
  StartPolicy(ruleset, args.chain);
  Packet packet;
  auto src = ParseIpv4(args.src);
  auto dst = ParseIpv4(args.dst);
  auto proto = ParsePacketProtocol(args.proto);
  if (!src || !dst || !proto) {
    err << "fwsimp: error: bad packet field\n";
    return kExitUsage;
  }
  packet.src = *src;
  packet.dst = *dst;
  packet.protocol = *proto;

  EvalTrace trace;
  FilterDecision decision =
      eval_firewall(ruleset, DefaultBoolMatcher(ParseExtraPolicy(
                                 args.assume_unknown)),
                    packet, args.chain, &trace);
  out << "decision: " << ToString(decision) << '\n';
  for (const TraceStep& step : trace) {
    out << "  " << step.chain << '[' << step.index + 1 << "] "
        << (step.action.kind() == Action::Kind::kEmpty ? "(no target)"
                                                       : ToString(step.action))
        << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// diff

struct DiffArgs {
  std::string path_a;
  std::string path_b;
  std::string chain = "INPUT";
  std::string universe = "width8";
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::string assume_unknown = "nomatch";
  std::size_t cap = kDefaultUniverseCap;
  std::size_t show = 20;
  bool unfold_b = false;
};

void CollectCidrs(const MatchExpr& m, std::vector<Cidr>& out) {
  switch (m.kind()) {
    case MatchExpr::Kind::kTrue:
      return;
    case MatchExpr::Kind::kNot:
      CollectCidrs(m.operand(), out);
      return;
    case MatchExpr::Kind::kAnd:
      CollectCidrs(m.left(), out);
      CollectCidrs(m.right(), out);
      return;
    case MatchExpr::Kind::kPrim:
      if (const auto* s = std::get_if<SrcCidr>(&m.primitive())) {
        out.push_back(s->cidr);
      } else if (const auto* d = std::get_if<DstCidr>(&m.primitive())) {
        out.push_back(d->cidr);
      }
      return;
  }
}

// Start addresses of the intervals on which every CIDR in play is constant.
std::vector<std::uint32_t> ClassStarts(const std::vector<Ruleset>& rulesets) {
  std::vector<Cidr> cidrs;
  for (const Ruleset& rs : rulesets) {
    for (const auto& [name, chain] : rs.chains) {
      for (const Rule& r : chain) CollectCidrs(r.match, cidrs);
    }
  }
  std::set<std::uint32_t> starts{0};
  for (const Cidr& c : cidrs) {
    starts.insert(c.base());
    if (c.last() != UINT32_MAX) starts.insert(c.last() + 1);
  }
  return {starts.begin(), starts.end()};
}

// Uniform in [0, bound) from raw engine output; independent of the standard
// library's distribution implementation.
std::uint64_t Uniform(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

int Diff(const DiffArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<Ruleset> rulesets{Load(args.path_a, err).ruleset,
                                Load(args.path_b, err).ruleset};
  for (const Ruleset& rs : rulesets) StartPolicy(rs, args.chain);
  std::vector<std::uint32_t> starts = ClassStarts(rulesets);

  std::vector<Packet> universe;
  if (args.universe == "sample") {
    out << "universe: sample, samples " << args.samples << ", seed "
        << args.seed << '\n';
    if (args.samples > args.cap) {
      throw UniverseTooLarge("sample count exceeds the universe cap");
    }
    std::mt19937_64 rng(args.seed);
    auto address = [&] {
      std::size_t k = Uniform(rng, starts.size());
      std::uint64_t lo = starts[k];
      std::uint64_t hi =
          k + 1 < starts.size() ? starts[k + 1] : std::uint64_t{1} << 32;
      return static_cast<std::uint32_t>(lo + Uniform(rng, hi - lo));
    };
    for (std::size_t i = 0; i < args.samples; ++i) {
      Packet p;
      p.src = address();
      p.dst = address();
      p.protocol = kAllPacketProtocols[Uniform(rng, 4)];
      universe.push_back(p);
    }
  } else {
    int bits = 0;
    if (args.universe.rfind("width", 0) == 0) {
      bits = std::atoi(args.universe.c_str() + 5);
    }
    if (bits < 1 || bits > 32) {
      err << "fwsimp: error: --universe takes widthN (1..32) or sample\n";
      return kExitUsage;
    }
    // Class representatives plus a 2^bits grid over the address space.
    std::set<std::uint32_t> points(starts.begin(), starts.end());
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << bits); ++i) {
      points.insert(static_cast<std::uint32_t>(i << (32 - bits)));
    }
    std::uint64_t size =
        static_cast<std::uint64_t>(points.size()) * points.size() * 4;
    out << "universe: width" << bits << ", " << size << " packets\n";
    if (size > args.cap) {
      throw UniverseTooLarge("universe of " + std::to_string(size) +
                             " packets exceeds the cap of " +
                             std::to_string(args.cap));
    }
    universe.reserve(size);
    for (std::uint32_t s : points) {
      for (std::uint32_t d : points) {
        for (PacketProtocol proto : kAllPacketProtocols) {
          universe.push_back(Packet{s, d, proto});
        }
      }
    }
  }

  BoolMatcher gamma = DefaultBoolMatcher(ParseExtraPolicy(args.assume_unknown));
  out << "oracle: unknown matches " << args.assume_unknown << '\n';
  std::vector<Rule> flat_b;
  if (args.unfold_b) {
    LoopCheck loops = check_no_loops(rulesets[1], args.chain);
    if (!loops.ok) throw LoopDetected("call cycle " + Join(loops.cycle));
    flat_b = optimize(unfold_completely(rulesets[1], args.chain));
  }
  Policy policy_b = StartPolicy(rulesets[1], args.chain);
  std::size_t differences = 0;
  for (const Packet& p : universe) {
    FilterDecision a = eval_firewall(rulesets[0], gamma, p, args.chain);
    FilterDecision b = args.unfold_b
                           ? eval_list(flat_b, gamma, p, policy_b)
                           : eval_firewall(rulesets[1], gamma, p, args.chain);
    if (a == b) continue;
    if (differences++ < args.show) {
      out << "differs: " << ToString(p) << ": " << ToString(a) << " vs "
          << ToString(b) << '\n';
    }
  }
  if (differences > args.show) {
    out << "... " << differences - args.show << " more\n";
  }
  out << "checked: " << universe.size() << ", differences: " << differences
      << '\n';
  return differences == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Firewall ruleset unfolding and simplification", "fwsimp"};
  app.require_subcommand(1);

  CheckArgs check;
  CLI::App* check_cmd =
      app.add_subcommand("check", "Report undefined targets and call loops");
  check_cmd->add_option("path", check.path, "iptables-save file")->required();
  check_cmd->add_option("--chain", check.chain, "Chain whose depth to report");

  SimplifyArgs simplify;
  CLI::App* simplify_cmd = app.add_subcommand(
      "simplify", "Unfold, approximate and emit a flat ruleset");
  simplify_cmd->add_option("path", simplify.path)->required();
  simplify_cmd->add_option("--chain", simplify.chain);
  simplify_cmd->add_option("--tactic", simplify.tactic)
      ->check(CLI::IsMember({"allow", "deny"}));
  simplify_cmd->add_flag("--strip-established", simplify.strip_established,
                         "Drop a leading ESTABLISHED accept rule");
  simplify_cmd->add_flag("--no-normalize", simplify.no_normalize);
  simplify_cmd->add_option("--blowup-limit", simplify.blowup_limit,
                           "Max rules one rule may normalize into")
      ->check(CLI::PositiveNumber);
  simplify_cmd->add_flag("--icmp-known", simplify.icmp_known,
                         "Treat ICMP protocol matches as understood");
  simplify_cmd->add_option("--format", simplify.format)
      ->check(CLI::IsMember({"save", "json"}));
  simplify_cmd->add_option("--out", simplify.out_path);

  EvalArgs eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Decide one packet with the exact semantics");
  eval_cmd->add_option("path", eval.path)->required();
  eval_cmd->add_option("--chain", eval.chain);
  eval_cmd->add_option("--src", eval.src);
  eval_cmd->add_option("--dst", eval.dst);
  eval_cmd->add_option("--proto", eval.proto)
      ->check(CLI::IsMember({"tcp", "udp", "icmp", "other"}));
  eval_cmd->add_option("--assume-unknown", eval.assume_unknown)
      ->check(CLI::IsMember({"match", "nomatch", "error"}));

  DiffArgs diff;
  CLI::App* diff_cmd = app.add_subcommand(
      "diff", "Compare two rulesets packet by packet");
  diff_cmd->add_option("path_a", diff.path_a)->required();
  diff_cmd->add_option("path_b", diff.path_b)->required();
  diff_cmd->add_option("--chain", diff.chain);
  diff_cmd->add_option("--universe", diff.universe, "widthN or sample");
  diff_cmd->add_option("--samples", diff.samples)->check(CLI::PositiveNumber);
  diff_cmd->add_option("--seed", diff.seed);
  diff_cmd->add_option("--assume-unknown", diff.assume_unknown)
      ->check(CLI::IsMember({"match", "nomatch", "error"}));
  diff_cmd->add_option("--cap", diff.cap, "Largest universe to enumerate");
  diff_cmd->add_option("--show", diff.show, "Differing packets to list");
  diff_cmd->add_flag("--unfold-b", diff.unfold_b,
                     "Compare against the unfolded, optimized second ruleset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check_cmd) return Check(check, out, err);
    if (*simplify_cmd) return Simplify(simplify, out, err);
    if (*eval_cmd) return Eval(eval, out, err);
    return Diff(diff, out, err);
  } catch (const ParseError& e) {
    err << "fwsimp: parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ReadFailure& e) {
    err << "fwsimp: error: " << e.what() << '\n';
    return kExitParse;
  } catch (const LoopDetected& e) {
    err << "fwsimp: error: " << e.what() << '\n';
    return kExitLoop;
  } catch (const DepthExhausted& e) {
    err << "fwsimp: error: " << e.what() << '\n';
    return kExitLoop;
  } catch (const BlowupLimitExceeded& e) {
    err << "fwsimp: error: " << e.what() << '\n';
    return kExitLimit;
  } catch (const UniverseTooLarge& e) {
    err << "fwsimp: error: " << e.what() << '\n';
    return kExitLimit;
  } catch (const UnknownPrimitiveHit& e) {
    err << "fwsimp: error: " << e.what() << '\n';
    return kExitUnknownHit;
  } catch (const NotEmittable& e) {
    err << "fwsimp: error: " << e.what() << '\n';
    return kExitNotEmittable;
  } catch (const Error& e) {
    err << "fwsimp: error: " << e.what() << '\n';
    return kExitViolation;
  }
}

}  // namespace fwsimp
