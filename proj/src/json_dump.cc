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

#include "fwsimp/json_dump.h"

#include <json.hpp>

namespace fwsimp {
namespace {

using nlohmann::json;

json MatchJson(const MatchExpr& m) {
  switch (m.kind()) {
    case MatchExpr::Kind::kTrue:
      return {{"kind", "true"}};
    case MatchExpr::Kind::kNot:
      return {{"kind", "not"}, {"arg", MatchJson(m.operand())}};
    case MatchExpr::Kind::kAnd:
      return {{"kind", "and"},
              {"left", MatchJson(m.left())},
              {"right", MatchJson(m.right())}};
    case MatchExpr::Kind::kPrim:
      break;
  }
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SrcCidr>) {
          return {{"kind", "src"}, {"cidr", x.cidr.ToString()}};
        } else if constexpr (std::is_same_v<T, DstCidr>) {
          return {{"kind", "dst"}, {"cidr", x.cidr.ToString()}};
        } else if constexpr (std::is_same_v<T, Protocol>) {
          return {{"kind", "protocol"}, {"name", ToString(x.name)}};
        } else {
          return {{"kind", "extra"},
                  {"module", x.module},
                  {"options", x.options}};
        }
      },
      m.primitive());
}

std::string ActionName(const Action& action) {
  switch (action.kind()) {
    case Action::Kind::kAccept:
      return "accept";
    case Action::Kind::kDrop:
      return "drop";
    case Action::Kind::kReject:
      return "reject";
    case Action::Kind::kLog:
      return "log";
    case Action::Kind::kEmpty:
      return "empty";
    case Action::Kind::kCall:
      return "call";
    case Action::Kind::kReturn:
      return "return";
  }
  return "";
}

}  // namespace

std::string emit_json(std::span<const Rule> rules) {
  json list = json::array();
  for (const Rule& rule : rules) {
    json r = {{"action", ActionName(rule.action)},
              {"match", MatchJson(rule.match)}};
    if (rule.action.kind() == Action::Kind::kCall) {
      r["target"] = rule.action.target();
    }
    list.push_back(std::move(r));
  }
  json doc = {{"rules", std::move(list)}, {"schema", kJsonSchemaVersion}};
  return doc.dump(2) + "\n";
}

}  // namespace fwsimp
