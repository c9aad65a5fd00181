// Recomputes the tiling constants stored in include/flab/golden.hpp.
//   gen_constants            human-readable summary
//   gen_constants --header   header text for golden.hpp

#include <cstdio>
#include <cstring>

#include "flab/gosper.hpp"

int main(int argc, char** argv) {
  using namespace flab;
  const bool header = argc > 1 && std::strcmp(argv[1], "--header") == 0;
  constexpr int kDiameterGeneration = 12;
  constexpr int kGeneration = 8;

  const double diam = compute_raw_diameter(kDiameterGeneration);
  const double inr = compute_raw_inradius(kGeneration);
  // compute_constants normalizes by the stored diameter; callers regenerate
  // twice when the diameter itself changes.
  const TilingConstants c = compute_constants(kGeneration);

  if (!header) {
    std::printf("raw diameter (g=%d)  %.17g\n", kDiameterGeneration, diam);
    std::printf("raw inradius (g=%d)   %.17g\n", kGeneration, inr);
    std::printf("d0 %.17g\neta0 %.17g\ninradius %.17g\na2 %d\na3 %d\n", c.d0, c.eta0, c.inradius, c.a2, c.a3);
    return 0;
  }
  std::printf(
      "#pragma once\n\n"
      "// Generated by tools/gen_constants; do not edit by hand.\n"
      "// Regenerate with: build/tools/gen_constants --header > include/flab/golden.hpp\n\n"
      "namespace flab::golden {\n\n"
      "inline constexpr int kVersion = 1;\n"
      "inline constexpr int kGeneration = %d;\n"
      "inline constexpr double kRawDiameter = %.17g;\n"
      "inline constexpr double kRawInradius = %.17g;\n"
      "inline constexpr double kD0 = %.17g;\n"
      "inline constexpr double kEta0 = %.17g;\n"
      "inline constexpr double kInradius = %.17g;\n"
      "inline constexpr int kA2 = %d;\n"
      "inline constexpr int kA3 = %d;\n\n"
      "}  // namespace flab::golden\n",
      kGeneration, diam, inr, c.d0, c.eta0, c.inradius, c.a2, c.a3);
  return 0;
}
