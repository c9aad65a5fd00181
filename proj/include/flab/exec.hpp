#pragma once

namespace flab {

/// Selects the serial reference kernel or its OpenMP counterpart. Both produce
/// bit-identical results; the serial path is kept for testing and benchmarking.
enum class Exec { serial, parallel };

}  // namespace flab
