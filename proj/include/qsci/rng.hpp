/*******************************************************************************
 * Copyright (c) 2026 The gqsci authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cmath>
#include <cstdint>

namespace qsci {

/// Splittable counter-based random stream (SplitMix64 core).
///
/// A stream is identified by an immutable key; draws advance only a counter,
/// and child streams are derived from (key, labels) without consuming state.
/// Every stochastic operation in the library takes an explicit stream so that
/// experiments replay bit-identically from a single seed.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ 0x5851f42d4c957f2dULL)) {}

  /// Derive an independent stream from this stream's key and two labels.
  /// Deterministic and independent of how many values were drawn here.
  RngStream child(std::uint64_t a, std::uint64_t b = 0) const {
    std::uint64_t k = mix(key_ ^ mix(a ^ 0x9e3779b97f4a7c15ULL));
    return RngStream(mix(k ^ mix(b ^ 0xd1b54a32d192ed03ULL)));
  }

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix(counter_ ^ key_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller. Consumes two uniforms per call.
  double normal() {
    double u1 = uniform();
    // avoid log(0)
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
  }

  /// Rademacher draw: +1 or -1 with equal probability.
  double rademacher() { return (next_u64() & 1ULL) ? 1.0 : -1.0; }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

} // namespace qsci
