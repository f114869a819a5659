#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bearing/rng.hpp"

namespace bearing {

/// C(n, k); throws std::overflow_error when the result exceeds 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// The `rank`-th k-subset of {0..n-1} in lexicographic order (ascending).
std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank);

/// Inverse of unrank_combination; `subset` must be ascending.
std::uint64_t rank_combination(std::size_t n, const std::vector<std::size_t>& subset);

/// Lazily draws a uniformly random permutation of [0, space) one element at
/// a time (sparse Fisher-Yates), so any prefix is a uniform sample of
/// distinct indices and memory grows with the number of draws only.
class DistinctSampler {
 public:
  DistinctSampler(std::uint64_t space, std::uint64_t seed) : space_(space), rng_(seed) {}

  std::uint64_t space() const noexcept { return space_; }
  std::uint64_t drawn() const noexcept { return drawn_; }
  bool exhausted() const noexcept { return drawn_ == space_; }

  std::uint64_t next();

 private:
  std::uint64_t value_at(std::uint64_t i) const;

  std::uint64_t space_;
  std::uint64_t drawn_ = 0;
  Rng rng_;
  std::unordered_map<std::uint64_t, std::uint64_t> swapped_;
};

}  // namespace bearing
