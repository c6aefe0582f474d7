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

#include "fwsimp/iptables_save.h"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "fwsimp/debug_format.h"
#include "fwsimp/errors.h"

namespace fwsimp {
namespace {

struct Token {
  std::string_view text;
  std::size_t begin;  // byte offset in the line
  std::size_t end;
};

// Whitespace-separated words; a double-quoted section (with backslash
// escapes) belongs to the surrounding word.
std::vector<Token> Tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t'; };
  while (i < line.size()) {
    if (is_space(line[i])) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    while (i < line.size() && !is_space(line[i])) {
      if (line[i] == '"') {
        std::size_t quote = i++;
        while (i < line.size() && line[i] != '"') {
          if (line[i] == '\\' && i + 1 < line.size()) ++i;
          ++i;
        }
        if (i >= line.size()) {
          throw ParseError("unterminated quote", line_no, quote + 1);
        }
      }
      ++i;
    }
    tokens.push_back({line.substr(begin, i - begin), begin, i});
  }
  return tokens;
}

bool IsSourceFlag(std::string_view t) { return t == "-s" || t == "--source"; }
bool IsDestFlag(std::string_view t) {
  return t == "-d" || t == "--destination";
}
bool IsProtoFlag(std::string_view t) { return t == "-p" || t == "--protocol"; }

class SaveParser {
 public:
  explicit SaveParser(std::string_view text) : text_(text) {}

  ParseResult Run() {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t nl = text_.find('\n', pos);
      if (nl == std::string_view::npos) nl = text_.size();
      std::string_view line = text_.substr(pos, nl - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ++line_no;
      Line(line, line_no);
      pos = nl + 1;
    }
    if (table_ != Table::kNone) {
      Warn(line_no, "missing COMMIT at end of input");
    }
    for (const auto& [target, where] : calls_) {
      if (!result_.ruleset.chains.contains(target)) {
        throw WellFormednessError("line " + std::to_string(where) +
                                  ": jump to undeclared chain " + target);
      }
    }
    return std::move(result_);
  }

 private:
  enum class Table { kNone, kFilter, kSkipped };

  void Warn(std::size_t line_no, const std::string& message) {
    result_.warnings.push_back("line " + std::to_string(line_no) + ": " +
                               message);
  }

  void Line(std::string_view line, std::size_t line_no) {
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') return;
    std::vector<Token> tokens = Tokenize(line, line_no);
    const Token& head = tokens.front();

    if (head.text.front() == '*') {
      if (table_ != Table::kNone) {
        throw ParseError("table started before COMMIT", line_no,
                         head.begin + 1);
      }
      std::string_view name = head.text.substr(1);
      if (name == "filter") {
        table_ = Table::kFilter;
      } else {
        table_ = Table::kSkipped;
        Warn(line_no, "skipping table " + std::string(name));
      }
      return;
    }
    if (head.text == "COMMIT") {
      if (table_ == Table::kNone) {
        throw ParseError("COMMIT outside a table", line_no, head.begin + 1);
      }
      table_ = Table::kNone;
      return;
    }
    if (table_ == Table::kNone) {
      throw ParseError("directive outside a table", line_no, head.begin + 1);
    }
    if (table_ == Table::kSkipped) return;

    if (head.text.front() == ':') {
      Declaration(tokens, line_no);
      return;
    }
    std::size_t i = 0;
    if (head.text.front() == '[') ++i;  // packet/byte counters
    if (i >= tokens.size() || tokens[i].text != "-A") {
      const Token& t = i < tokens.size() ? tokens[i] : head;
      throw ParseError("expected -A", line_no, t.begin + 1);
    }
    AppendRule(line, tokens, i + 1, line_no);
  }

  void Declaration(const std::vector<Token>& tokens, std::size_t line_no) {
    const Token& head = tokens.front();
    std::string name(head.text.substr(1));
    if (name.empty()) throw ParseError("missing chain name", line_no, 2);
    if (tokens.size() < 2) {
      throw ParseError("missing chain policy", line_no, head.end + 1);
    }
    if (result_.ruleset.chains.contains(name)) {
      throw ParseError("chain " + name + " declared twice", line_no, 2);
    }
    const Token& policy = tokens[1];
    if (IsBuiltinChain(name)) {
      if (policy.text == "ACCEPT") {
        result_.ruleset.builtin_policies[name] = Policy::kAccept;
      } else if (policy.text == "DROP") {
        result_.ruleset.builtin_policies[name] = Policy::kDrop;
      } else {
        throw ParseError("builtin chain needs ACCEPT or DROP policy", line_no,
                         policy.begin + 1);
      }
    } else if (policy.text != "-") {
      throw ParseError("user chain policy must be -", line_no,
                       policy.begin + 1);
    }
    result_.ruleset.chains[name];
  }

  // Collects unrecognized tokens [begin, end) into one Extra.
  struct TokenRun {
    std::size_t first = 0;
    std::size_t last = 0;  // exclusive token index
    bool empty() const { return first == last; }
  };

  void AppendRule(std::string_view line, const std::vector<Token>& tokens,
                  std::size_t i, std::size_t line_no) {
    if (i >= tokens.size()) {
      throw ParseError("missing chain name after -A", line_no,
                       tokens[i - 1].end + 1);
    }
    std::string chain(tokens[i].text);
    if (!result_.ruleset.chains.contains(chain)) {
      throw ParseError("rule for undeclared chain " + chain, line_no,
                       tokens[i].begin + 1);
    }
    ++i;

    std::vector<MatchExpr> conjuncts;
    std::optional<Action> action;
    bool seen_src = false, seen_dst = false, seen_proto = false;
    TokenRun run{i, i};

    auto flush = [&] {
      if (run.empty()) return;
      conjuncts.push_back(MakeExtra(line, tokens, run, line_no));
      run = TokenRun{};
    };
    auto extend = [&](std::size_t from, std::size_t to) {
      if (run.empty()) run.first = from;
      run.last = to;
    };
    auto value = [&](std::size_t flag) -> const Token& {
      if (flag + 1 >= tokens.size()) {
        throw ParseError("missing value for " + std::string(tokens[flag].text),
                         line_no, tokens[flag].end + 1);
      }
      return tokens[flag + 1];
    };
    auto once = [&](bool& seen, const Token& flag) {
      if (seen) {
        throw ParseError("duplicate " + std::string(flag.text), line_no,
                         flag.begin + 1);
      }
      seen = true;
    };

    while (i < tokens.size()) {
      std::string_view t = tokens[i].text;
      if (t == "-j" || t == "--jump") {
        const Token& target = value(i);
        flush();
        action = TargetAction(std::string(target.text), line_no);
        if (i + 2 < tokens.size()) {
          Warn(line_no, "dropping options of target " +
                            std::string(target.text));
        }
        break;
      }
      if (t == "-g" || t == "--goto") {
        throw ParseError("goto is not supported", line_no,
                         tokens[i].begin + 1);
      }
      bool negated = false;
      std::size_t flag = i;
      if (t == "!" && i + 1 < tokens.size()) {
        std::string_view next = tokens[i + 1].text;
        if (IsSourceFlag(next) || IsDestFlag(next) || IsProtoFlag(next)) {
          negated = true;
          flag = i + 1;
        }
      }
      std::string_view f = tokens[flag].text;
      if (IsSourceFlag(f) || IsDestFlag(f)) {
        bool src = IsSourceFlag(f);
        once(src ? seen_src : seen_dst, tokens[flag]);
        const Token& v = value(flag);
        std::optional<Cidr> cidr = Cidr::Parse(v.text);
        if (!cidr) {
          throw ParseError("bad address " + std::string(v.text), line_no,
                           v.begin + 1);
        }
        flush();
        MatchExpr m = src ? MatchExpr::Prim(SrcCidr{*cidr})
                          : MatchExpr::Prim(DstCidr{*cidr});
        conjuncts.push_back(negated ? MatchExpr::Not(m) : m);
        i = flag + 2;
        continue;
      }
      if (IsProtoFlag(f)) {
        const Token& v = value(flag);
        std::optional<ProtocolName> name = ParseProtocolName(v.text);
        if (!name) {
          // Protocols outside the model stay verbatim.
          extend(i, flag + 2);
          i = flag + 2;
          continue;
        }
        once(seen_proto, tokens[flag]);
        flush();
        MatchExpr m = MatchExpr::Prim(Protocol{*name});
        conjuncts.push_back(negated ? MatchExpr::Not(m) : m);
        i = flag + 2;
        continue;
      }
      extend(i, i + 1);
      ++i;
    }
    flush();
    result_.ruleset.chains[chain].push_back(
        Rule{ConjoinAll(conjuncts), action.value_or(Action::Empty())});
  }

  MatchExpr MakeExtra(std::string_view line, const std::vector<Token>& tokens,
                      const TokenRun& run, std::size_t line_no) {
    const Token& first = tokens[run.first];
    const Token& last = tokens[run.last - 1];
    Extra extra;
    if (first.text == "-m" || first.text == "--match") {
      if (run.last - run.first < 2) {
        throw ParseError("missing module name", line_no, first.end + 1);
      }
      extra.module = std::string(tokens[run.first + 1].text);
      if (run.last - run.first > 2) {
        std::size_t begin = tokens[run.first + 2].begin;
        extra.options = std::string(line.substr(begin, last.end - begin));
      }
    } else {
      extra.options =
          std::string(line.substr(first.begin, last.end - first.begin));
    }
    return MatchExpr::Prim(std::move(extra));
  }

  Action TargetAction(const std::string& target, std::size_t line_no) {
    if (target == "ACCEPT") return Action::Accept();
    if (target == "DROP") return Action::Drop();
    if (target == "REJECT") return Action::Reject();
    if (target == "LOG") return Action::Log();
    if (target == "RETURN") return Action::Return();
    calls_.emplace_back(target, line_no);
    return Action::Call(target);
  }

  std::string_view text_;
  Table table_ = Table::kNone;
  ParseResult result_;
  std::vector<std::pair<std::string, std::size_t>> calls_;
};

void EmitMatch(std::ostream& out, const MatchExpr& match,
               const std::string& where) {
  int src = 0, dst = 0, proto = 0;
  auto fail = [&](const std::string& why) {
    throw NotEmittable(where + ": " + why + ": " + ToDebugString(match));
  };
  for (const MatchExpr& c : TopLevelConjuncts(match)) {
    if (c.is_true()) continue;
    bool negated = c.kind() == MatchExpr::Kind::kNot;
    MatchExpr leaf = negated ? c.operand() : c;
    if (leaf.kind() != MatchExpr::Kind::kPrim) {
      fail(leaf.is_true() ? "unmatchable conjunct" : "match is not in NNF");
    }
    const Primitive& x = leaf.primitive();
    auto cidr_text = [&](const Cidr& cidr) {
      if (cidr.width() != Cidr::kIpv4Width) fail("non-IPv4 address width");
      return cidr.ToString();
    };
    if (const auto* s = std::get_if<SrcCidr>(&x)) {
      if (++src > 1) fail("more than one source range");
      out << (negated ? " ! -s " : " -s ") << cidr_text(s->cidr);
    } else if (const auto* d = std::get_if<DstCidr>(&x)) {
      if (++dst > 1) fail("more than one destination range");
      out << (negated ? " ! -d " : " -d ") << cidr_text(d->cidr);
    } else if (const auto* p = std::get_if<Protocol>(&x)) {
      if (!negated && p->name == ProtocolName::kAll) continue;
      if (++proto > 1) fail("more than one protocol");
      out << (negated ? " ! -p " : " -p ") << ToString(p->name);
    } else {
      const auto& e = std::get<Extra>(x);
      if (negated) fail("negated unknown match");
      if (!e.module.empty()) {
        out << " -m " << e.module;
        if (!e.options.empty()) out << ' ' << e.options;
      } else if (!e.options.empty()) {
        out << ' ' << e.options;
      } else {
        fail("empty unknown match");
      }
    }
  }
}

void EmitRule(std::ostream& out, const std::string& chain, const Rule& rule,
              std::size_t index) {
  std::string where = "rule " + std::to_string(index + 1) + " of " + chain;
  out << "-A " << chain;
  EmitMatch(out, rule.match, where);
  if (rule.action.kind() != Action::Kind::kEmpty) {
    out << " -j " << ToString(rule.action);
  }
  out << '\n';
}

}  // namespace

ParseResult parse_save(std::string_view text) {
  return SaveParser(text).Run();
}

std::string emit_save(const Ruleset& ruleset) {
  std::vector<std::string> order;
  for (const char* builtin : {"INPUT", "FORWARD", "OUTPUT"}) {
    if (ruleset.chains.contains(builtin) ||
        ruleset.builtin_policies.contains(builtin)) {
      order.emplace_back(builtin);
    }
  }
  for (const auto& [name, chain] : ruleset.chains) {
    if (!IsBuiltinChain(name)) order.push_back(name);
  }

  std::ostringstream out;
  out << "*filter\n";
  for (const std::string& name : order) {
    out << ':' << name << ' ';
    if (IsBuiltinChain(name)) {
      auto it = ruleset.builtin_policies.find(name);
      if (it == ruleset.builtin_policies.end()) {
        throw NotEmittable("builtin chain " + name + " has no policy");
      }
      out << ToString(it->second);
    } else {
      out << '-';
    }
    out << " [0:0]\n";
  }
  for (const std::string& name : order) {
    auto it = ruleset.chains.find(name);
    if (it == ruleset.chains.end()) continue;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      EmitRule(out, name, it->second[i], i);
    }
  }
  out << "COMMIT\n";
  return out.str();
}

std::string emit_save(std::span<const Rule> rules, const std::string& chain,
                      Policy policy) {
  std::ostringstream out;
  out << "*filter\n:" << chain << ' '
      << (IsBuiltinChain(chain) ? ToString(policy) : "-") << " [0:0]\n";
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i].action.kind() == Action::Kind::kCall) {
      throw NotEmittable("rule " + std::to_string(i + 1) + " of " + chain +
                         ": call to " + rules[i].action.target());
    }
    EmitRule(out, chain, rules[i], i);
  }
  out << "COMMIT\n";
  return out.str();
}

}  // namespace fwsimp
