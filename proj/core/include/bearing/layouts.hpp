#pragma once

#include <vector>

#include "bearing/datamodel.hpp"

// Acquisition layouts mirroring the structure of the three public datasets
// (bearing ids, health states, conditions, repetitions, channels). The records
// reference `signals/<acquisition_id>.f32`; nothing is written to disk. They
// drive split generation and auditing without the original archives, and are
// the skeleton for synthetic datasets (see synth_dataset.hpp).
//
// Geometry values are nominal deep-groove-ball-bearing figures, not the
// datasets' published geometry.
namespace bearing::layouts {

struct LayoutOptions {
  double duration_s = 10.0;
  // Overrides the dataset's native rate when > 0 (useful for cheap tests).
  double sampling_rate_hz = 0.0;
  bool with_geometry = true;
};

/// 20 bearings (ids 1..20; 5 per fault mode inner/outer/ball/cage), each
/// recorded healthy, weak and strong: 60 records, 42 kHz, 1750 rpm.
std::vector<AcquisitionRecord> uored(const LayoutOptions& opts = {});

/// Curated naturally-damaged subset: K001-K006 healthy, KA04/15/16/22/30
/// outer, KI04/14/16/17/18/21 inner; 4 operating conditions x 20 repetitions.
/// With include_combined, KB23/KB24/KB27 (inner+outer) are appended.
std::vector<AcquisitionRecord> pu(const LayoutOptions& opts = {}, bool include_combined = false);

/// {DE, FE} x {inner, outer, ball} x {007, 014, 021} faulty bearings, 4 loads,
/// two channels per run (the opposite channel sees healthy bearing H_DE or
/// H_FE): 144 records, 12 kHz. With include_dual_healthy the four H_DE+H_FE
/// baseline runs (8 records) are appended.
std::vector<AcquisitionRecord> cwru(const LayoutOptions& opts = {},
                                    bool include_dual_healthy = false);

/// Layout for a built-in profile name ("uored", "pu", "cwru").
std::vector<AcquisitionRecord> for_profile(const DatasetProfile& profile,
                                           const LayoutOptions& opts = {});

inline constexpr const char* kPuConditions[] = {"N15_M07_F10", "N09_M07_F10", "N15_M01_F10",
                                               "N15_M07_F04"};

}  // namespace bearing::layouts
