// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace elc {

inline constexpr const char* version_string = "elcflow 0.1.0";

}  // namespace elc
