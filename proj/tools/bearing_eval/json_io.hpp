#pragma once

#include <json.hpp>

#include "bearing/features.hpp"

namespace bearing::features {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FeatureConfig, window_s, overlap, band_low_hz,
                                                band_high_hz, n_harmonics, tolerance_fraction)
}  // namespace bearing::features
