// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include "voxaug/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace voxaug {

namespace {

void require_same_spatial(const Volume& v, const SegMask& m) {
    if (m.shape[0] != v.shape[1] || m.shape[1] != v.shape[2] || m.shape[2] != v.shape[3])
        throw Error(ErrorCode::ShapeMismatch, "mask spatial shape does not match volume");
}

}  // namespace

Volume normalize_nonzero(const Volume& v) {
    Volume out = v;
    const std::int64_t per_channel = v.voxels_per_channel();
    for (std::int64_t c = 0; c < v.channels(); ++c) {
        float* channel = out.data.data() + c * per_channel;
        double sum = 0.0;
        std::int64_t n = 0;
        for (std::int64_t i = 0; i < per_channel; ++i) {
            if (channel[i] != 0.f) {
                sum += channel[i];
                ++n;
            }
        }
        if (n == 0) continue;  // all-zero channel passes through
        const double mean = sum / static_cast<double>(n);
        double sq = 0.0;
        for (std::int64_t i = 0; i < per_channel; ++i) {
            if (channel[i] != 0.f) {
                double d = channel[i] - mean;
                sq += d * d;
            }
        }
        const double std_pop = std::sqrt(sq / static_cast<double>(n));
        if (std_pop == 0.0)
            throw Error(ErrorCode::DegenerateChannel,
                        "channel " + std::to_string(c) + " has non-zero voxels with zero std");
        for (std::int64_t i = 0; i < per_channel; ++i)
            if (channel[i] != 0.f)
                channel[i] = static_cast<float>((channel[i] - mean) / std_pop);
    }
    return out;
}

Volume scale_intensity(const Volume& v, double factor) {
    Volume out = v;
    const float k = static_cast<float>(1.0 + factor);
    for (float& value : out.data) value *= k;
    return out;
}

Volume scale_intensity_per_channel(const Volume& v, const std::vector<double>& factors) {
    if (static_cast<std::int64_t>(factors.size()) != v.channels())
        throw Error(ErrorCode::LengthMismatch, "one scale factor per channel required");
    Volume out = v;
    const std::int64_t per_channel = v.voxels_per_channel();
    for (std::int64_t c = 0; c < v.channels(); ++c) {
        const float k = static_cast<float>(1.0 + factors[static_cast<std::size_t>(c)]);
        float* channel = out.data.data() + c * per_channel;
        for (std::int64_t i = 0; i < per_channel; ++i) channel[i] *= k;
    }
    return out;
}

Volume shift_intensity(const Volume& v, double offset) {
    Volume out = v;
    const float o = static_cast<float>(offset);
    for (float& value : out.data) value += o;
    return out;
}

Volume shift_intensity_per_channel(const Volume& v, const std::vector<double>& offsets) {
    if (static_cast<std::int64_t>(offsets.size()) != v.channels())
        throw Error(ErrorCode::LengthMismatch, "one shift offset per channel required");
    Volume out = v;
    const std::int64_t per_channel = v.voxels_per_channel();
    for (std::int64_t c = 0; c < v.channels(); ++c) {
        const float o = static_cast<float>(offsets[static_cast<std::size_t>(c)]);
        float* channel = out.data.data() + c * per_channel;
        for (std::int64_t i = 0; i < per_channel; ++i) channel[i] += o;
    }
    return out;
}

Volume rand_scale_intensity(const Volume& v, RngStream& rng, double factor_range, double p,
                            bool per_channel) {
    if (!(factor_range > 0.0))
        throw Error(ErrorCode::InvalidArgument, "factor_range must be > 0");
    if (!rng.bernoulli(p)) return v;
    if (per_channel) {
        std::vector<double> factors(static_cast<std::size_t>(v.channels()));
        for (double& f : factors) f = rng.uniform(-factor_range, factor_range);
        return scale_intensity_per_channel(v, factors);
    }
    return scale_intensity(v, rng.uniform(-factor_range, factor_range));
}

Volume rand_shift_intensity(const Volume& v, RngStream& rng, double offset_range, double p,
                            bool per_channel) {
    if (offset_range < 0.0)
        throw Error(ErrorCode::InvalidArgument, "offset_range must be >= 0");
    if (!rng.bernoulli(p)) return v;
    if (per_channel) {
        std::vector<double> offsets(static_cast<std::size_t>(v.channels()));
        for (double& o : offsets) o = rng.uniform(-offset_range, offset_range);
        return shift_intensity_per_channel(v, offsets);
    }
    return shift_intensity(v, rng.uniform(-offset_range, offset_range));
}

std::pair<Volume, std::optional<SegMask>> crop_at(const Volume& v, const std::optional<SegMask>& m,
                                                  const std::array<std::int64_t, 3>& corner,
                                                  const std::array<std::int64_t, 3>& roi) {
    const auto spatial = v.spatial_shape();
    for (int a = 0; a < 3; ++a) {
        if (roi[a] < 1) throw Error(ErrorCode::InvalidArgument, "roi extents must be >= 1");
        if (roi[a] > spatial[a])
            throw Error(ErrorCode::RoiTooLarge, "roi exceeds spatial extent on axis " + std::to_string(a));
        if (corner[a] < 0 || corner[a] + roi[a] > spatial[a])
            throw Error(ErrorCode::InvalidArgument, "crop corner out of range on axis " + std::to_string(a));
    }
    if (m) require_same_spatial(v, *m);

    Volume out;
    out.shape = {v.shape[0], roi[0], roi[1], roi[2]};
    out.spacing = v.spacing;
    out.affine = v.affine;
    out.channel_names = v.channel_names;
    out.data.resize(static_cast<std::size_t>(out.shape[0] * roi[0] * roi[1] * roi[2]));
    for (std::int64_t c = 0; c < out.shape[0]; ++c)
        for (std::int64_t z = 0; z < roi[0]; ++z)
            for (std::int64_t y = 0; y < roi[1]; ++y) {
                const float* src = &v.data[static_cast<std::size_t>(
                    v.index(c, corner[0] + z, corner[1] + y, corner[2]))];
                float* dst = &out.data[static_cast<std::size_t>(out.index(c, z, y, 0))];
                std::copy(src, src + roi[2], dst);
            }

    std::optional<SegMask> out_mask;
    if (m) {
        SegMask cropped;
        cropped.shape = roi;
        cropped.spacing = m->spacing;
        cropped.affine = m->affine;
        cropped.labels.resize(static_cast<std::size_t>(roi[0] * roi[1] * roi[2]));
        for (std::int64_t z = 0; z < roi[0]; ++z)
            for (std::int64_t y = 0; y < roi[1]; ++y) {
                const std::uint8_t* src = &m->labels[static_cast<std::size_t>(
                    m->index(corner[0] + z, corner[1] + y, corner[2]))];
                std::uint8_t* dst = &cropped.labels[static_cast<std::size_t>(cropped.index(z, y, 0))];
                std::copy(src, src + roi[2], dst);
            }
        out_mask = std::move(cropped);
    }
    return {std::move(out), std::move(out_mask)};
}

std::pair<Volume, std::optional<SegMask>> rand_spatial_crop(const Volume& v,
                                                            const std::optional<SegMask>& m,
                                                            RngStream& rng,
                                                            const std::array<std::int64_t, 3>& roi) {
    const auto spatial = v.spatial_shape();
    std::array<std::int64_t, 3> corner{};
    for (int a = 0; a < 3; ++a) {
        if (roi[a] > spatial[a])
            throw Error(ErrorCode::RoiTooLarge, "roi exceeds spatial extent on axis " + std::to_string(a));
        corner[a] = static_cast<std::int64_t>(
            rng.uniform_int(static_cast<std::uint64_t>(spatial[a] - roi[a] + 1)));
    }
    return crop_at(v, m, corner, roi);
}

std::pair<Volume, std::optional<SegMask>> flip_z(const Volume& v, const std::optional<SegMask>& m) {
    if (m) require_same_spatial(v, *m);
    Volume out = v;
    const std::int64_t Z = v.shape[1], plane = v.shape[2] * v.shape[3];
    for (std::int64_t c = 0; c < v.shape[0]; ++c)
        for (std::int64_t z = 0; z < Z; ++z) {
            const float* src = &v.data[static_cast<std::size_t>((c * Z + (Z - 1 - z)) * plane)];
            float* dst = &out.data[static_cast<std::size_t>((c * Z + z) * plane)];
            std::copy(src, src + plane, dst);
        }
    std::optional<SegMask> out_mask;
    if (m) {
        SegMask flipped = *m;
        for (std::int64_t z = 0; z < Z; ++z) {
            const std::uint8_t* src = &m->labels[static_cast<std::size_t>((Z - 1 - z) * plane)];
            std::uint8_t* dst = &flipped.labels[static_cast<std::size_t>(z * plane)];
            std::copy(src, src + plane, dst);
        }
        out_mask = std::move(flipped);
    }
    return {std::move(out), std::move(out_mask)};
}

std::pair<Volume, std::optional<SegMask>> rand_flip_z(const Volume& v,
                                                      const std::optional<SegMask>& m,
                                                      RngStream& rng, double p) {
    if (!rng.bernoulli(p)) return {v, m};
    return flip_z(v, m);
}

WarpField identity_warp(const std::array<std::int64_t, 3>& spatial,
                        const std::array<std::int64_t, 3>& grid_spacing) {
    WarpField field;
    for (int a = 0; a < 3; ++a) {
        if (grid_spacing[a] < 1)
            throw Error(ErrorCode::InvalidArgument, "grid spacing must be >= 1");
        if (grid_spacing[a] > spatial[a] || spatial[a] % grid_spacing[a] != 0)
            throw Error(ErrorCode::GridTooCoarse,
                        "grid spacing must evenly divide the spatial extent on axis " + std::to_string(a));
        field.grid_points[a] = spatial[a] / grid_spacing[a] + 1;
    }
    field.grid_spacing = grid_spacing;
    field.offsets.assign(
        static_cast<std::size_t>(field.grid_points[0] * field.grid_points[1] * field.grid_points[2] * 3),
        0.0);
    return field;
}

namespace {

std::array<double, 3> sample_offset(const WarpField& field, double z, double y, double x) {
    const auto& np = field.grid_points;
    auto locate = [](double pos, std::int64_t spacing, std::int64_t points) {
        double g = pos / static_cast<double>(spacing);
        auto i0 = static_cast<std::int64_t>(std::floor(g));
        i0 = std::clamp<std::int64_t>(i0, 0, points - 2);
        double frac = std::clamp(g - static_cast<double>(i0), 0.0, 1.0);
        return std::pair<std::int64_t, double>{i0, frac};
    };
    auto [iz, fz] = locate(z, field.grid_spacing[0], np[0]);
    auto [iy, fy] = locate(y, field.grid_spacing[1], np[1]);
    auto [ix, fx] = locate(x, field.grid_spacing[2], np[2]);

    std::array<double, 3> result{0, 0, 0};
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                double w = (dz ? fz : 1 - fz) * (dy ? fy : 1 - fy) * (dx ? fx : 1 - fx);
                if (w == 0.0) continue;
                std::size_t base = static_cast<std::size_t>(
                    (((iz + dz) * np[1] + (iy + dy)) * np[2] + (ix + dx)) * 3);
                for (int a = 0; a < 3; ++a) result[a] += w * field.offsets[base + a];
            }
    return result;
}

float trilinear_sample(const Volume& v, std::int64_t c, double z, double y, double x) {
    auto iz = static_cast<std::int64_t>(std::floor(z));
    auto iy = static_cast<std::int64_t>(std::floor(y));
    auto ix = static_cast<std::int64_t>(std::floor(x));
    double fz = z - iz, fy = y - iy, fx = x - ix;
    double acc = 0.0;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                double w = (dz ? fz : 1 - fz) * (dy ? fy : 1 - fy) * (dx ? fx : 1 - fx);
                if (w == 0.0) continue;
                std::int64_t zz = iz + dz, yy = iy + dy, xx = ix + dx;
                bool inside = zz >= 0 && zz < v.shape[1] && yy >= 0 && yy < v.shape[2] && xx >= 0 &&
                              xx < v.shape[3];
                if (inside) acc += w * v.at(c, zz, yy, xx);
            }
    return static_cast<float>(acc);
}

}  // namespace

std::pair<Volume, std::optional<SegMask>> warp(const Volume& v, const std::optional<SegMask>& m,
                                               const WarpField& field) {
    if (m) require_same_spatial(v, *m);
    const auto spatial = v.spatial_shape();
    for (int a = 0; a < 3; ++a)
        if ((field.grid_points[a] - 1) * field.grid_spacing[a] != spatial[a])
            throw Error(ErrorCode::ShapeMismatch, "warp field built for a different spatial shape");

    const std::array<double, 3> center{(spatial[0] - 1) / 2.0, (spatial[1] - 1) / 2.0,
                                       (spatial[2] - 1) / 2.0};
    Volume out = v;
    std::optional<SegMask> out_mask;
    if (m) out_mask = *m;

    for (std::int64_t z = 0; z < spatial[0]; ++z)
        for (std::int64_t y = 0; y < spatial[1]; ++y)
            for (std::int64_t x = 0; x < spatial[2]; ++x) {
                const double rel[3] = {z - center[0], y - center[1], x - center[2]};
                double src[3];
                for (int a = 0; a < 3; ++a)
                    src[a] = field.linear[a * 3 + 0] * rel[0] + field.linear[a * 3 + 1] * rel[1] +
                             field.linear[a * 3 + 2] * rel[2] + center[a] + field.translation[a];
                const auto offset = sample_offset(field, static_cast<double>(z),
                                                  static_cast<double>(y), static_cast<double>(x));
                const double sz = src[0] + offset[0];
                const double sy = src[1] + offset[1];
                const double sx = src[2] + offset[2];

                for (std::int64_t c = 0; c < v.shape[0]; ++c)
                    out.at(c, z, y, x) = trilinear_sample(v, c, sz, sy, sx);

                if (out_mask) {
                    auto nz = static_cast<std::int64_t>(std::lround(sz));
                    auto ny = static_cast<std::int64_t>(std::lround(sy));
                    auto nx = static_cast<std::int64_t>(std::lround(sx));
                    bool inside = nz >= 0 && nz < spatial[0] && ny >= 0 && ny < spatial[1] &&
                                  nx >= 0 && nx < spatial[2];
                    out_mask->at(z, y, x) = inside ? m->at(nz, ny, nx) : 0;
                }
            }
    return {std::move(out), std::move(out_mask)};
}

WarpField make_random_warp(const std::array<std::int64_t, 3>& spatial, RngStream& rng,
                           const ElasticAffineParams& params) {
    WarpField field = identity_warp(spatial, params.grid_spacing);

    // Offsets are drawn per control point per axis as a fraction of the grid
    // spacing, axis-major in (z, y, x) scan order.
    const std::int64_t n_points = field.grid_points[0] * field.grid_points[1] * field.grid_points[2];
    for (std::int64_t i = 0; i < n_points; ++i)
        for (int a = 0; a < 3; ++a)
            field.offsets[static_cast<std::size_t>(i * 3 + a)] =
                rng.uniform(params.offset_range.first, params.offset_range.second) *
                static_cast<double>(params.grid_spacing[a]);

    const double sigma_vox = rng.uniform(params.kernel_sigma_range.first, params.kernel_sigma_range.second);

    // Separable Gaussian smoothing over the control lattice; sigma is given in
    // voxels, so convert to lattice units per axis.
    const auto& np = field.grid_points;
    for (int axis = 0; axis < 3; ++axis) {
        const double sigma = sigma_vox / static_cast<double>(params.grid_spacing[axis]);
        const auto radius = static_cast<std::int64_t>(std::ceil(3.0 * sigma));
        if (radius < 1) continue;
        std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
        double total = 0.0;
        for (std::int64_t k = -radius; k <= radius; ++k) {
            double w = std::exp(-0.5 * (k / sigma) * (k / sigma));
            kernel[static_cast<std::size_t>(k + radius)] = w;
            total += w;
        }
        for (double& w : kernel) w /= total;

        std::vector<double> smoothed(field.offsets.size());
        for (std::int64_t z = 0; z < np[0]; ++z)
            for (std::int64_t y = 0; y < np[1]; ++y)
                for (std::int64_t x = 0; x < np[2]; ++x)
                    for (int comp = 0; comp < 3; ++comp) {
                        double acc = 0.0;
                        for (std::int64_t k = -radius; k <= radius; ++k) {
                            std::int64_t pz = z, py = y, px = x;
                            if (axis == 0) pz = std::clamp<std::int64_t>(z + k, 0, np[0] - 1);
                            if (axis == 1) py = std::clamp<std::int64_t>(y + k, 0, np[1] - 1);
                            if (axis == 2) px = std::clamp<std::int64_t>(x + k, 0, np[2] - 1);
                            acc += kernel[static_cast<std::size_t>(k + radius)] *
                                   field.offsets[static_cast<std::size_t>(((pz * np[1] + py) * np[2] + px) * 3 + comp)];
                        }
                        smoothed[static_cast<std::size_t>(((z * np[1] + y) * np[2] + x) * 3 + comp)] = acc;
                    }
        field.offsets = std::move(smoothed);
    }

    const double shear_bound = rng.uniform(params.shear_range.first, params.shear_range.second);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) field.linear[i * 3 + j] = rng.uniform(-shear_bound, shear_bound);

    return field;
}

std::pair<Volume, std::optional<SegMask>> rand_elastic_affine(const Volume& v,
                                                              const std::optional<SegMask>& m,
                                                              RngStream& rng,
                                                              const ElasticAffineParams& params) {
    identity_warp(v.spatial_shape(), params.grid_spacing);  // reject a bad grid even when gated off
    if (!rng.bernoulli(params.p)) return {v, m};
    return warp(v, m, make_random_warp(v.spatial_shape(), rng, params));
}

Volume add_gaussian_noise(const Volume& v, RngStream& rng, double sigma) {
    if (sigma < 0.0) throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
    if (sigma == 0.0) return v;
    Volume out = v;
    for (float& value : out.data) value += static_cast<float>(sigma * rng.normal());
    return out;
}

Volume gaussian_noise(const Volume& v, RngStream& rng, double sigma, double p) {
    if (sigma < 0.0) throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
    if (!rng.bernoulli(p)) return v;
    return add_gaussian_noise(v, rng, sigma);
}

Volume mix_volumes(const Volume& x, const Volume& x_r, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
    if (x.shape != x_r.shape)
        throw Error(ErrorCode::ShapeMismatch, "mix requires identical volume shapes");
    if (alpha == 0.0) return x;
    if (alpha == 1.0) {
        Volume out = x;
        out.data = x_r.data;
        return out;
    }
    Volume out = x;
    const auto a = static_cast<float>(alpha);
    const float one_minus = 1.f - a;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = one_minus * x.data[i] + a * x_r.data[i];
    return out;
}

Permutation make_spn_permutation(const std::array<std::int64_t, 3>& spatial_shape,
                                 std::uint64_t seed) {
    const std::int64_t plane = spatial_shape[1] * spatial_shape[2];
    if (plane < 1) throw Error(ErrorCode::InvalidArgument, "in-plane size must be >= 1");

    Permutation perm;
    perm.plane_y = spatial_shape[1];
    perm.plane_x = spatial_shape[2];
    perm.order.resize(static_cast<std::size_t>(plane));
    std::iota(perm.order.begin(), perm.order.end(), 0u);

    RngStream rng(seed);
    for (std::int64_t i = plane - 1; i > 0; --i) {
        auto j = static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
        std::swap(perm.order[static_cast<std::size_t>(i)], perm.order[static_cast<std::size_t>(j)]);
    }
    return perm;
}

Volume shuffle_pixels(const Volume& v, const Permutation& perm) {
    if (perm.plane_y != v.shape[2] || perm.plane_x != v.shape[3])
        throw Error(ErrorCode::PermutationShapeMismatch,
                    "permutation built for a different in-plane shape");
    const std::int64_t plane = perm.plane_y * perm.plane_x;
    Volume out = v;
    for (std::int64_t c = 0; c < v.shape[0]; ++c)
        for (std::int64_t z = 0; z < v.shape[1]; ++z) {
            const float* src = &v.data[static_cast<std::size_t>((c * v.shape[1] + z) * plane)];
            float* dst = &out.data[static_cast<std::size_t>((c * v.shape[1] + z) * plane)];
            for (std::int64_t j = 0; j < plane; ++j)
                dst[j] = src[perm.order[static_cast<std::size_t>(j)]];
        }
    return out;
}

Volume spn(const Volume& x, const Permutation& perm, RngStream& rng, double alpha, double p) {
    if (alpha < 0.0 || alpha > 1.0)
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
    if (!rng.bernoulli(p)) return x;
    if (alpha == 0.0) return x;
    return mix_volumes(x, shuffle_pixels(x, perm), alpha);
}

}  // namespace voxaug
