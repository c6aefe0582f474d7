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

#ifndef FWSIMP_JSON_DUMP_H_
#define FWSIMP_JSON_DUMP_H_

#include <span>
#include <string>

#include "fwsimp/core.h"

namespace fwsimp {

inline constexpr int kJsonSchemaVersion = 1;

// {"rules": [{"action": ..., "match": ...}, ...], "schema": 1}
// Object keys are sorted, so equal inputs give byte-identical text.
// Match nodes: {"kind": "true"}, {"kind": "not", "arg": M},
// {"kind": "and", "left": M, "right": M}, {"kind": "src"|"dst", "cidr": S},
// {"kind": "protocol", "name": S}, {"kind": "extra", "module": S,
// "options": S}. Call actions carry "target".
std::string emit_json(std::span<const Rule> rules);

}  // namespace fwsimp

#endif  // FWSIMP_JSON_DUMP_H_
