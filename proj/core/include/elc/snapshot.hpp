// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "elc/field.hpp"

namespace elc {

// Field snapshot container format:
//   magic "ELF1" | version u32 | kind u32 | dims 3xu64 | box 3xf64 | data f64...
// All integers and floats little-endian; data in C (row-major,
// component-fastest) order.

inline constexpr std::uint32_t snapshot_format_version = 1;

using AnyField = std::variant<ScalarField, VectorField, TensorField, DirectorField>;

void write_snapshot(std::ostream& out, const ScalarField& f);
void write_snapshot(std::ostream& out, const VectorField& f);
void write_snapshot(std::ostream& out, const TensorField& f);
void write_snapshot(std::ostream& out, const DirectorField& f);

void write_snapshot(const std::string& path, const AnyField& f);

/// Reads one snapshot starting at the stream position.
AnyField read_snapshot(std::istream& in);
AnyField read_snapshot(const std::string& path);

FieldKind snapshot_kind(const AnyField& f);

}  // namespace elc
