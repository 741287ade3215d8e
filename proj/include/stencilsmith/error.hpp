// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace stencilsmith {

/// Base class of every error raised by the library. Callers that only need
/// to distinguish "our" failures from foreign ones can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinate outside the grid or stencil neighbourhood.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Invalid dimensions, tiles, presets or command-line configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed grid container.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Kernel precondition failure (non-finite input, insufficient halo, ...).
class KernelError : public Error {
 public:
  using Error::Error;
};

/// Pivot magnitude under the precision's threshold during elimination.
class SingularSystemError : public KernelError {
 public:
  using KernelError::KernelError;
};

/// WindowPlan does not match the grid or kernel it is applied to.
class PlanError : public Error {
 public:
  using Error::Error;
};

/// Failure inside the worker pool that is not itself a library error.
class ExecutionError : public Error {
 public:
  using Error::Error;
};

/// Dedicated-channel budget exceeded in the analytic model.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Model evaluated on an invalid workload (e.g. zero traffic).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Tuner found nothing inside the footprint budget.
class NoFeasiblePointError : public Error {
 public:
  using Error::Error;
};

}  // namespace stencilsmith
