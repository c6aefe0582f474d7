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

#ifndef FWSIMP_SRC_MATCH_INTERNAL_H_
#define FWSIMP_SRC_MATCH_INTERNAL_H_

#include <memory>

#include "fwsimp/core.h"

namespace fwsimp {

// Node-level access for hot evaluation loops inside the library.
struct NodeAccess {
  static const MatchExpr::Node* Get(const MatchExpr& m) {
    return m.node_.get();
  }
};

}  // namespace fwsimp

#endif  // FWSIMP_SRC_MATCH_INTERNAL_H_
