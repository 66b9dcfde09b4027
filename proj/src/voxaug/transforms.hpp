// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXAUG_TRANSFORMS_HPP
#define VOXAUG_TRANSFORMS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "voxaug/rng.hpp"
#include "voxaug/types.hpp"

namespace voxaug {

// Each random transform splits into a deterministic core (testable with
// injected parameters) and a thin wrapper that draws its parameters from an
// RngStream behind a probability gate.

/// Per channel over non-zero voxels: subtract the mean, divide by the
/// population std. Zero voxels stay exactly 0; all-zero channels pass through.
Volume normalize_nonzero(const Volume& v);

Volume scale_intensity(const Volume& v, double factor);                    // value * (1 + factor)
Volume scale_intensity_per_channel(const Volume& v, const std::vector<double>& factors);
Volume shift_intensity(const Volume& v, double offset);
Volume shift_intensity_per_channel(const Volume& v, const std::vector<double>& offsets);

Volume rand_scale_intensity(const Volume& v, RngStream& rng, double factor_range, double p,
                            bool per_channel = false);
Volume rand_shift_intensity(const Volume& v, RngStream& rng, double offset_range, double p,
                            bool per_channel = false);

/// Crop with an explicit corner (z, y, x); the same window applies to every
/// channel and to the mask.
std::pair<Volume, std::optional<SegMask>> crop_at(const Volume& v, const std::optional<SegMask>& m,
                                                  const std::array<std::int64_t, 3>& corner,
                                                  const std::array<std::int64_t, 3>& roi);

std::pair<Volume, std::optional<SegMask>> rand_spatial_crop(const Volume& v,
                                                            const std::optional<SegMask>& m,
                                                            RngStream& rng,
                                                            const std::array<std::int64_t, 3>& roi);

std::pair<Volume, std::optional<SegMask>> flip_z(const Volume& v, const std::optional<SegMask>& m);

std::pair<Volume, std::optional<SegMask>> rand_flip_z(const Volume& v,
                                                      const std::optional<SegMask>& m,
                                                      RngStream& rng, double p);

struct ElasticAffineParams {
    double p = 0.3;
    std::pair<double, double> offset_range{0.1, 0.3};        // fractions of grid spacing
    std::pair<double, double> kernel_sigma_range{0.1, 0.3};  // voxels
    std::pair<double, double> shear_range{0.1, 0.3};
    std::array<std::int64_t, 3> grid_spacing{4, 4, 4};       // voxels along z, y, x
};

/// Dense per-control-point displacement field plus an affine, both expressed
/// in (z, y, x) voxel coordinates. The affine is the backward (pull) map: an
/// output voxel p samples the input at linear*(p - center) + center +
/// translation + interpolated offset.
struct WarpField {
    std::array<std::int64_t, 3> grid_points{0, 0, 0};
    std::array<std::int64_t, 3> grid_spacing{1, 1, 1};
    std::vector<double> offsets;  // grid_points product x 3, (z,y,x) per point
    std::array<double, 9> linear{1, 0, 0, 0, 1, 0, 0, 0, 1};
    std::array<double, 3> translation{0, 0, 0};
};

WarpField identity_warp(const std::array<std::int64_t, 3>& spatial,
                        const std::array<std::int64_t, 3>& grid_spacing);

/// Draws control-point offsets, kernel sigma and shear from rng (no
/// probability gate) and returns the composed field.
WarpField make_random_warp(const std::array<std::int64_t, 3>& spatial, RngStream& rng,
                           const ElasticAffineParams& params);

/// Trilinear resampling for the volume, nearest-neighbour for the mask,
/// out-of-bounds samples read as 0.
std::pair<Volume, std::optional<SegMask>> warp(const Volume& v, const std::optional<SegMask>& m,
                                               const WarpField& field);

std::pair<Volume, std::optional<SegMask>> rand_elastic_affine(const Volume& v,
                                                              const std::optional<SegMask>& m,
                                                              RngStream& rng,
                                                              const ElasticAffineParams& params);

Volume add_gaussian_noise(const Volume& v, RngStream& rng, double sigma);
Volume gaussian_noise(const Volume& v, RngStream& rng, double sigma, double p);

/// Convex mix (1 - alpha) * x + alpha * x_r. Shared by MSR and SPN; alpha 0
/// and 1 short-circuit so those ends are bit-exact.
Volume mix_volumes(const Volume& x, const Volume& x_r, double alpha);

/// Fixed in-plane pixel permutation, one per run: built once from a seed and
/// then reused for every volume, channel and slice.
struct Permutation {
    std::int64_t plane_y = 0;
    std::int64_t plane_x = 0;
    std::vector<std::uint32_t> order;  // length plane_y * plane_x
};

Permutation make_spn_permutation(const std::array<std::int64_t, 3>& spatial_shape,
                                 std::uint64_t seed);

/// Applies the permutation to the (y, x) plane of every slice and channel.
Volume shuffle_pixels(const Volume& v, const Permutation& perm);

Volume spn(const Volume& x, const Permutation& perm, RngStream& rng, double alpha, double p);

}  // namespace voxaug

#endif
