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

#ifndef FWSIMP_CIDR_H_
#define FWSIMP_CIDR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fwsimp {

// An address prefix over `width`-bit addresses. Width is 32 for IPv4; smaller
// widths give toy address spaces small enough to enumerate exhaustively.
// The base never has host bits set.
class Cidr {
 public:
  static constexpr int kIpv4Width = 32;

  // 0.0.0.0/0
  Cidr() = default;
  // Clears host bits of `base`. Throws std::invalid_argument when
  // `prefix_len` or `width` are out of range or `base` exceeds the width.
  Cidr(std::uint32_t base, int prefix_len, int width = kIpv4Width);

  // Accepts "a.b.c.d" (a /32) and "a.b.c.d/len". Host bits are cleared, as
  // iptables does.
  static std::optional<Cidr> Parse(std::string_view text);

  std::uint32_t base() const { return base_; }
  int prefix_len() const { return prefix_len_; }
  int width() const { return width_; }

  // Network mask within `width` bits.
  std::uint32_t mask() const;
  // Highest address in the range.
  std::uint32_t last() const;
  bool is_universe() const { return prefix_len_ == 0; }

  // Dotted quad with length for IPv4 ("10.0.0.0/8"), "base/len@width" for
  // toy widths.
  std::string ToString() const;

  bool operator==(const Cidr&) const = default;

 private:
  std::uint32_t base_ = 0;
  std::uint8_t prefix_len_ = 0;
  std::uint8_t width_ = kIpv4Width;
};

// True iff the top prefix_len bits of `ip` equal those of the base.
bool cidr_contains(const Cidr& c, std::uint32_t ip);

// Prefixes are either nested or disjoint, so the intersection is the more
// specific prefix or nothing. Both inputs must have the same width.
std::optional<Cidr> cidr_intersect(const Cidr& a, const Cidr& b);

std::optional<std::uint32_t> ParseIpv4(std::string_view text);
std::string FormatIpv4(std::uint32_t address);

}  // namespace fwsimp

#endif  // FWSIMP_CIDR_H_
