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

#include "fwsimp/debug_format.h"

#include <cctype>
#include <charconv>

#include "fwsimp/errors.h"

namespace fwsimp {
namespace {

void AppendQuoted(std::string& out, std::string_view text) {
  out += '"';
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

void Render(const MatchExpr& m, std::string& out) {
  switch (m.kind()) {
    case MatchExpr::Kind::kTrue:
      out += "true";
      return;
    case MatchExpr::Kind::kPrim:
      out += ToDebugString(m.primitive());
      return;
    case MatchExpr::Kind::kNot:
      out += "(not ";
      Render(m.operand(), out);
      out += ')';
      return;
    case MatchExpr::Kind::kAnd:
      out += "(and ";
      Render(m.left(), out);
      out += ' ';
      Render(m.right(), out);
      out += ')';
      return;
  }
}

class DebugParser {
 public:
  explicit DebugParser(std::string_view text) : text_(text) {}

  MatchExpr ParseAll() {
    MatchExpr m = ParseExpr();
    SkipSpace();
    if (pos_ != text_.size()) Fail("trailing input");
    return m;
  }

 private:
  [[noreturn]] void Fail(const std::string& message) const {
    throw ParseError(message, 1, pos_ + 1);
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void Expect(char c) {
    SkipSpace();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      Fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  std::string_view Word() {
    SkipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) Fail("expected a word");
    return text_.substr(start, pos_ - start);
  }

  std::string Quoted() {
    Expect('"');
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) Fail("unterminated string");
      char c = text_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= text_.size()) Fail("dangling escape");
        c = text_[pos_++];
      }
      out += c;
    }
  }

  Cidr ParseCidrWord() {
    std::size_t at = pos_;
    std::string_view word = Word();
    auto amp = word.find('@');
    if (amp == std::string_view::npos) {
      if (auto c = Cidr::Parse(word)) return *c;
      pos_ = at;
      Fail("bad CIDR");
    }
    auto slash = word.find('/');
    unsigned base = 0, len = 0, width = 0;
    auto num = [&](std::string_view s, unsigned& v) {
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc() && p == s.data() + s.size() && !s.empty();
    };
    if (slash == std::string_view::npos || slash > amp ||
        !num(word.substr(0, slash), base) ||
        !num(word.substr(slash + 1, amp - slash - 1), len) ||
        !num(word.substr(amp + 1), width)) {
      pos_ = at;
      Fail("bad toy CIDR");
    }
    try {
      return Cidr(base, static_cast<int>(len), static_cast<int>(width));
    } catch (const std::invalid_argument& e) {
      pos_ = at;
      Fail(e.what());
    }
  }

  MatchExpr ParseExpr() {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] != '(') {
      std::size_t at = pos_;
      if (Word() == "true") return MatchExpr::True();
      pos_ = at;
      Fail("expected 'true' or '('");
    }
    Expect('(');
    std::size_t at = pos_;
    std::string_view head = Word();
    MatchExpr result;
    if (head == "not") {
      result = MatchExpr::Not(ParseExpr());
    } else if (head == "and") {
      MatchExpr left = ParseExpr();
      result = MatchExpr::And(std::move(left), ParseExpr());
    } else if (head == "src") {
      result = MatchExpr::Prim(SrcCidr{ParseCidrWord()});
    } else if (head == "dst") {
      result = MatchExpr::Prim(DstCidr{ParseCidrWord()});
    } else if (head == "proto") {
      std::size_t name_at = pos_;
      auto name = ParseProtocolName(Word());
      if (!name) {
        pos_ = name_at;
        Fail("unknown protocol");
      }
      result = MatchExpr::Prim(Protocol{*name});
    } else if (head == "extra") {
      std::string module = Quoted();
      result = MatchExpr::Prim(Extra{std::move(module), Quoted()});
    } else {
      pos_ = at;
      Fail("unknown form '" + std::string(head) + "'");
    }
    Expect(')');
    return result;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string ToDebugString(const Primitive& primitive) {
  std::string out;
  if (const auto* src = std::get_if<SrcCidr>(&primitive)) {
    out = "(src " + src->cidr.ToString() + ")";
  } else if (const auto* dst = std::get_if<DstCidr>(&primitive)) {
    out = "(dst " + dst->cidr.ToString() + ")";
  } else if (const auto* proto = std::get_if<Protocol>(&primitive)) {
    out = "(proto " + std::string(ToString(proto->name)) + ")";
  } else {
    const auto& extra = std::get<Extra>(primitive);
    out = "(extra ";
    AppendQuoted(out, extra.module);
    out += ' ';
    AppendQuoted(out, extra.options);
    out += ')';
  }
  return out;
}

std::string ToDebugString(const MatchExpr& m) {
  std::string out;
  Render(m, out);
  return out;
}

std::string ToDebugString(const Action& action) {
  switch (action.kind()) {
    case Action::Kind::kEmpty:
      return "EMPTY";
    case Action::Kind::kCall:
      return "CALL " + action.target();
    default:
      return ToString(action);
  }
}

std::string ToDebugString(const Rule& rule) {
  return ToDebugString(rule.match) + " => " + ToDebugString(rule.action);
}

MatchExpr ParseDebugMatch(std::string_view text) {
  return DebugParser(text).ParseAll();
}

std::ostream& operator<<(std::ostream& os, const MatchExpr& m) {
  return os << ToDebugString(m);
}

std::ostream& operator<<(std::ostream& os, const Rule& rule) {
  return os << ToDebugString(rule);
}

}  // namespace fwsimp
