// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace stencilsmith::csv {

/// Shortest round-trip text, independent of the global locale.
std::string number(double v);
std::string number(std::uint64_t v);

/// Appends fields separated by ',' and ends rows with '\n'.
class Row {
 public:
  Row& operator<<(std::string_view field);
  Row& operator<<(double v) { return *this << std::string_view(number(v)); }
  Row& operator<<(std::uint64_t v) { return *this << std::string_view(number(v)); }
  void write(std::ostream& out) const;
  const std::string& text() const { return line_; }

 private:
  std::string line_;
  bool first_ = true;
};

}  // namespace stencilsmith::csv
