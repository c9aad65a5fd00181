#pragma once

// Generated by tools/gen_constants; do not edit by hand.
// Regenerate with: build/tools/gen_constants --header > include/flab/golden.hpp

namespace flab::golden {

inline constexpr int kVersion = 1;
inline constexpr int kGeneration = 8;
inline constexpr double kRawDiameter = 1.1917200936847079;
inline constexpr double kRawInradius = 0.43085655493532238;
inline constexpr double kD0 = 0.46181193954880639;
inline constexpr double kEta0 = 0.018000000000000002;
inline constexpr double kInradius = 0.36154311874884154;
inline constexpr int kA2 = 8;
inline constexpr int kA3 = 4;

}  // namespace flab::golden
