// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include "stencilsmith/csv.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace stencilsmith::csv {

std::string number(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return ec == std::errc{} ? std::string(buf.data(), end) : std::string("nan");
}

std::string number(std::uint64_t v) {
  std::array<char, 24> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

Row& Row::operator<<(std::string_view field) {
  if (!first_) line_ += ',';
  line_ += field;
  first_ = false;
  return *this;
}

void Row::write(std::ostream& out) const { out << line_ << '\n'; }

}  // namespace stencilsmith::csv
