// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "stencilsmith/grid.hpp"
#include "stencilsmith/kernels.hpp"

namespace stencilsmith {

/// Instruction-set variants of the region kernels. Every variant performs
/// the scalar operation sequence lane by lane, without contraction, so all
/// of them produce bitwise-identical output.
enum class Isa { scalar, avx2, neon };

std::string to_string(Isa isa);
Isa parse_isa(const std::string& text);

/// Compiled in and supported by the running CPU.
bool isa_available(Isa isa);
std::vector<Isa> available_isas();

/// Widest available variant, unless STENCILSMITH_ISA names another
/// available one.
Isa default_isa();

/// Region kernels write `dst` inside `box` only. `box` must lie inside the
/// input's interior; inputs are assumed validated.
void hdiff_region(const Grid3D& src, Grid3D& dst, const Box3& box, const HdiffParams& params,
                  Isa isa);
void vadvc_region(const FieldSet& fields, Grid3D& dst, const Box3& box, Isa isa);
void copy_region(const Grid3D& src, Grid3D& dst, const Box3& box, Isa isa);

}  // namespace stencilsmith
