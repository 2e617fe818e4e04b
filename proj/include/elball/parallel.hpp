#pragma once

namespace elball {

/// How batch kernels distribute work.
enum class Execution {
  /// Single-threaded reference path.
  kSerial,
  /// OpenMP with per-thread accumulators reduced in thread order.
  /// Reproducible for a fixed thread count.
  kParallel,
  /// OpenMP with per-item results reduced in item order. Bitwise equal to
  /// kSerial for any thread count.
  kDeterministic,
};

/// Applies the ELBALL_THREADS cap, if set, and returns the resulting thread
/// budget (1 without OpenMP).
int configure_threads_from_env();

int max_threads();

}  // namespace elball
