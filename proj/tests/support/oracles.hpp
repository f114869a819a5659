#pragma once

// Independent reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace oracle {

/// Standard normal CDF by Marsaglia's Taylor series
/// Phi(x) = 1/2 + phi(x) (x + x^3/3 + x^5/(3*5) + ...).
inline double normal_cdf_series(double x) {
  double sum = x, term = x;
  for (int i = 1; i < 500; ++i) {
    term *= x * x / (2.0 * i + 1.0);
    const double next = sum + term;
    if (next == sum) break;
    sum = next;
  }
  return 0.5 + sum * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Exact AUROC as a ratio of integers: 2 * (#correct pairs + #ties / 2) over
/// 2 * n_pos * n_neg, by O(n^2) pair counting.
struct Ratio {
  std::uint64_t twice_num = 0;
  std::uint64_t twice_den = 0;
  double value() const { return static_cast<double>(twice_num) / static_cast<double>(twice_den); }
};

inline Ratio auroc_pairs(std::span<const double> s, std::span<const std::uint8_t> y) {
  Ratio r;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      r.twice_den += 2;
      if (s[i] > s[j]) r.twice_num += 2;
      else if (s[i] == s[j]) r.twice_num += 1;
    }
  }
  return r;
}

/// O(n^2) DFT bin magnitudes |X_k|, k = 0..n/2.
inline std::vector<double> dft_abs(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    long double re = 0, im = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double a = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k * t % n) /
                            static_cast<long double>(n);
      re += x[t] * std::cos(a);
      im += x[t] * std::sin(a);
    }
    out[k] = static_cast<double>(std::sqrt(re * re + im * im));
  }
  return out;
}

/// Time-domain energy recovered from a one-sided amplitude spectrum of an
/// n-sample input (bin 0 and, for even n, the last bin are unscaled).
inline double energy_from_one_sided(std::span<const double> mags, std::size_t n) {
  long double e = 0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    const long double m = mags[k];
    const bool unscaled = k == 0 || (n % 2 == 0 && k + 1 == mags.size());
    e += unscaled ? m * m : m * m / 2;
  }
  return static_cast<double>(e * static_cast<long double>(n));
}

/// Median magnitude in [f - half_width, f + half_width] Hz, skipping bins
/// within `guard` bins of f.
inline double local_median(std::span<const double> mags, double bin_width, double f, double half_width,
                           std::size_t guard) {
  std::vector<double> v;
  const double centre = f / bin_width;
  for (std::size_t k = 1; k < mags.size(); ++k) {
    const double hz = static_cast<double>(k) * bin_width;
    if (std::abs(hz - f) > half_width) continue;
    if (std::abs(static_cast<double>(k) - centre) <= static_cast<double>(guard)) continue;
    v.push_back(mags[k]);
  }
  if (v.empty()) return 0.0;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("bearing-test-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace oracle
