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

#include "fwsimp/cidr.h"

#include <charconv>
#include <stdexcept>

namespace fwsimp {
namespace {

std::uint32_t WidthMask(int width) {
  return width == 32 ? 0xffffffffu : ((1u << width) - 1u);
}

std::uint32_t PrefixMask(int prefix_len, int width) {
  if (prefix_len == 0) return 0;
  return WidthMask(width) & ~WidthMask(width - prefix_len);
}

bool ParseUint(std::string_view text, unsigned max, unsigned& out) {
  if (text.empty() || text.size() > 10) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && out <= max;
}

}  // namespace

Cidr::Cidr(std::uint32_t base, int prefix_len, int width) {
  if (width < 1 || width > kIpv4Width) {
    throw std::invalid_argument("address width out of range");
  }
  if (prefix_len < 0 || prefix_len > width) {
    throw std::invalid_argument("prefix length out of range");
  }
  if ((base & ~WidthMask(width)) != 0) {
    throw std::invalid_argument("address exceeds width");
  }
  width_ = static_cast<std::uint8_t>(width);
  prefix_len_ = static_cast<std::uint8_t>(prefix_len);
  base_ = base & PrefixMask(prefix_len, width);
}

std::uint32_t Cidr::mask() const { return PrefixMask(prefix_len_, width_); }

std::uint32_t Cidr::last() const {
  return base_ | (WidthMask(width_) & ~mask());
}

std::optional<Cidr> Cidr::Parse(std::string_view text) {
  std::string_view address = text;
  unsigned len = 32;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    address = text.substr(0, slash);
    if (!ParseUint(text.substr(slash + 1), 32, len)) return std::nullopt;
  }
  std::optional<std::uint32_t> base = ParseIpv4(address);
  if (!base) return std::nullopt;
  return Cidr(*base, static_cast<int>(len));
}

std::string Cidr::ToString() const {
  if (width_ == kIpv4Width) {
    return FormatIpv4(base_) + "/" + std::to_string(prefix_len_);
  }
  return std::to_string(base_) + "/" + std::to_string(prefix_len_) + "@" +
         std::to_string(width_);
}

bool cidr_contains(const Cidr& c, std::uint32_t ip) {
  return ((ip ^ c.base()) & c.mask()) == 0;
}

std::optional<Cidr> cidr_intersect(const Cidr& a, const Cidr& b) {
  if (a.width() != b.width()) {
    throw std::invalid_argument("cidr_intersect: mismatched widths");
  }
  const Cidr& wide = a.prefix_len() <= b.prefix_len() ? a : b;
  const Cidr& narrow = a.prefix_len() <= b.prefix_len() ? b : a;
  if (cidr_contains(wide, narrow.base())) return narrow;
  return std::nullopt;
}

std::optional<std::uint32_t> ParseIpv4(std::string_view text) {
  std::uint32_t result = 0;
  for (int octet = 0; octet < 4; ++octet) {
    std::size_t dot = text.find('.');
    if ((octet < 3) == (dot == std::string_view::npos)) return std::nullopt;
    unsigned value = 0;
    if (!ParseUint(text.substr(0, dot), 255, value)) return std::nullopt;
    result = (result << 8) | value;
    text = octet < 3 ? text.substr(dot + 1) : std::string_view();
  }
  return result;
}

std::string FormatIpv4(std::uint32_t address) {
  return std::to_string(address >> 24) + "." +
         std::to_string((address >> 16) & 0xff) + "." +
         std::to_string((address >> 8) & 0xff) + "." +
         std::to_string(address & 0xff);
}

}  // namespace fwsimp
