// Copyright (c) 2026 the elcflow authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elc {

/// Base class for all elcflow errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, parameter set, or initial-data specification.
/// Messages carry a `section.key` path where one exists.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A field operation received non-finite data. Carries the first offending
/// location so a failing run can be traced back to a node and component.
class NonFiniteError : public Error {
  public:
    NonFiniteError(const std::string& what_field, std::size_t node, std::size_t component)
        : Error("non-finite value in " + what_field + " at node " + std::to_string(node) +
                ", component " + std::to_string(component)),
          field(what_field),
          node(node),
          component(component) {}

    std::string field;
    std::size_t node;
    std::size_t component;
};

/// Density reached zero or below where positivity is required.
class VacuumError : public Error {
  public:
    using Error::Error;
};

/// Raised by the time stepper when a stage produces non-finite data or the
/// step size underflows; the run driver converts it into a run outcome.
class BlowupError : public Error {
  public:
    BlowupError(double t, const std::string& reason)
        : Error("blow-up at t=" + std::to_string(t) + ": " + reason), t(t), reason(reason) {}

    double t;
    std::string reason;
};

/// Filesystem / serialization failure.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace elc
