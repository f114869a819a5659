#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

namespace bearing {

/// SplitMix64 finaliser. Used to derive independent sub-seeds from a seed
/// and a stream index so that per-plan / per-tree / per-seed work owns its
/// own generator state.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator with distributions implemented in-house.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std:: distribution adaptors are implementation-defined, so
/// uniform integers and normals are derived here to keep split plans and
/// synthetic data identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal deviate (Marsaglia polar method).
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace bearing
