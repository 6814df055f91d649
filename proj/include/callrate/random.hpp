#pragma once

#include <cstdint>
#include <random>

namespace callrate {

// Inverse standard normal CDF (quantile function), Wichura's PPND16 rational
// approximation.  Relative error is below 1e-15 for p in [1e-300, 1 - 1e-16].
// Throws std::invalid_argument unless 0 < p < 1.
double normal_quantile(double p);

// Deterministic normal deviate stream.
//
// The sequence produced for a given seed is part of the library contract and
// is identical on every conforming platform: std::mt19937_64 (whose output is
// fixed by the C++ standard) feeds a 52-bit uniform, which is mapped through
// normal_quantile.  No internal state is consumed other than one engine draw
// per deviate, so streams can be reproduced and cross-checked blockwise.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).  Uses the top 52 bits of the engine
  // output: u = (x >> 12) * 2^-52 + 2^-53.  Every value is an exactly
  // representable odd multiple of 2^-53, so u can never round to 0 or 1.
  double uniform() {
    const std::uint64_t x = engine_();
    return static_cast<double>(x >> 12) * 0x1.0p-52 + 0x1.0p-53;
  }

  // Standard normal deviate via the inverse-CDF method.
  double normal() { return normal_quantile(uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace callrate
