#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "bearing/datamodel.hpp"

// Manifest format: JSON Lines. Blank lines and lines starting with # are
// ignored. The first remaining line is a header
//   {"profile": {"name": ..., "fault_modes": [...], "sensor_locations": [...],
//                "health_states_per_bearing": n}}
// followed by one AcquisitionRecord object per line whose keys are the record
// field names. `label` is an array of 0/1 (or of fault-mode names, which are
// canonicalised to bits). `severity`, `rpm` and `geometry` are optional.
// Signal files are headerless little-endian float32 (.f32), resolved relative
// to the manifest's directory, and are not opened by load_manifest.
namespace bearing {

Dataset load_manifest(const std::filesystem::path& path);
Dataset parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {});

void write_manifest(const Dataset& dataset, std::ostream& out);
void write_manifest(const Dataset& dataset, const std::filesystem::path& path);

/// Reads the record's signal and checks its length against
/// sampling_rate_hz * duration_s (within one sample).
std::vector<double> read_signal(const Dataset& dataset, const AcquisitionRecord& record);

std::vector<double> read_f32(const std::filesystem::path& path);
void write_f32(const std::filesystem::path& path, std::span<const double> samples);

}  // namespace bearing
