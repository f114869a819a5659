#include "bearing/combinatorics.hpp"

#include <limits>
#include <stdexcept>

namespace bearing {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step.
    const std::uint64_t num = n - k + i;
    if (r > std::numeric_limits<std::uint64_t>::max() / num)
      throw std::overflow_error("binomial: result exceeds 64 bits");
    r = r * num / i;
  }
  return r;
}

std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank) {
  if (rank >= binomial(n, k)) throw std::out_of_range("unrank_combination: rank out of range");
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < k; ++slot) {
    // Skip candidates whose block of subsets lies entirely below rank.
    for (;; ++next) {
      const std::uint64_t block = binomial(n - next - 1, k - slot - 1);
      if (rank < block) break;
      rank -= block;
    }
    out.push_back(next++);
  }
  return out;
}

std::uint64_t rank_combination(std::size_t n, const std::vector<std::size_t>& subset) {
  const std::size_t k = subset.size();
  std::uint64_t rank = 0;
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < k; ++slot) {
    if (subset[slot] >= n || subset[slot] < next)
      throw std::invalid_argument("rank_combination: subset must be ascending and < n");
    for (; next < subset[slot]; ++next) rank += binomial(n - next - 1, k - slot - 1);
    ++next;
  }
  return rank;
}

std::uint64_t DistinctSampler::value_at(std::uint64_t i) const {
  auto it = swapped_.find(i);
  return it == swapped_.end() ? i : it->second;
}

std::uint64_t DistinctSampler::next() {
  if (exhausted()) throw std::out_of_range("DistinctSampler: space exhausted");
  const std::uint64_t i = drawn_++;
  const std::uint64_t j = i + rng_.below(space_ - i);
  const std::uint64_t vi = value_at(i), vj = value_at(j);
  swapped_[j] = vi;
  swapped_.erase(i);
  return vj;
}

}  // namespace bearing
