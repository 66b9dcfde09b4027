// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXAUG_NIFTI_HPP
#define VOXAUG_NIFTI_HPP

#include <string>

#include "voxaug/types.hpp"

namespace voxaug::nifti {

/// Reads a 3D or 4D NIfTI-1 volume (.nii or .nii.gz; .hdr/.img pairs via the
/// "ni1" magic). 3D files come back as single-channel 4D; intensities are
/// materialized as 32-bit floats with scl_slope/scl_inter applied.
Volume load_volume(const std::string& path);

/// Writes a single-file NIfTI-1 volume, float32, sform from the affine.
/// Gzip-compressed when the path ends in .gz. Round trip is bit-exact on the
/// voxel data and preserves the affine within 1e-6.
void save_volume(const Volume& v, const std::string& path);

/// Reads a label map and validates every value against {0, 1, 2, 4}.
SegMask load_mask(const std::string& path);

/// Writes a label map as uint8.
void save_mask(const SegMask& m, const std::string& path);

}  // namespace voxaug::nifti

#endif
