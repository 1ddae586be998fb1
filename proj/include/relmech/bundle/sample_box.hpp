#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "relmech/bundle/jet_point.hpp"

namespace relmech {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A box in (t, q, v) sampled by a Halton sequence, so every sweep over it is
/// deterministic. `seed` shifts the start of the sequence.
struct SampleBox {
  Interval t{0.0, 2.0};
  Interval q{-2.0, 2.0};
  Interval v{-2.0, 2.0};
  std::size_t count = 256;
  std::uint64_t seed = 0;

  /// The box used to certify coordinate changes (64 points).
  static SampleBox chart_default() {
    SampleBox box;
    box.count = 64;
    return box;
  }

  std::vector<JetPoint1> points(std::size_t m) const;
};

/// Radical inverse of `index` in base `base`.
double radical_inverse(std::uint64_t index, unsigned base);

/// The first `n` primes.
std::vector<unsigned> first_primes(std::size_t n);

}  // namespace relmech
