// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXAUG_TYPES_HPP
#define VOXAUG_TYPES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace voxaug {

enum class ErrorCode {
    NotFound,
    MalformedHeader,
    UnsupportedDatatype,
    NonFiniteData,
    IllegalLabel,
    IoFailure,
    InvalidArgument,
    ShapeMismatch,
    DegenerateChannel,
    RoiTooLarge,
    GridTooCoarse,
    EmptyPool,
    PermutationShapeMismatch,
    LengthMismatch,
    EmptyInput,
    NotNormalized,
    EpochOutOfRange,
    CaseSetMismatch,
    IncompleteMatrix,
    ZeroVarianceDifferences,
    InvalidDf,
    MissingChannel,
    MissingMask,
    EmptyStratum,
    ConfigParse,
    Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// 4D intensity volume, indexed (channel, z, y, x) with x fastest.
/// The affine maps homogeneous voxel indices in (x, y, z, 1) order to world
/// coordinates, matching the NIfTI s-row convention; it is stored row-major.
struct Volume {
    std::array<std::int64_t, 4> shape{0, 0, 0, 0};  // c, z, y, x
    std::array<float, 3> spacing{1.f, 1.f, 1.f};    // mm per voxel along z, y, x
    std::array<float, 16> affine{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
    std::vector<std::string> channel_names;  // optional; empty or size == channels
    std::vector<float> data;                 // shape product elements

    Volume() = default;
    Volume(std::array<std::int64_t, 4> s, std::vector<float> d);

    std::int64_t channels() const { return shape[0]; }
    std::int64_t size_z() const { return shape[1]; }
    std::int64_t size_y() const { return shape[2]; }
    std::int64_t size_x() const { return shape[3]; }
    std::int64_t voxels_per_channel() const { return shape[1] * shape[2] * shape[3]; }

    std::int64_t index(std::int64_t c, std::int64_t z, std::int64_t y, std::int64_t x) const {
        return ((c * shape[1] + z) * shape[2] + y) * shape[3] + x;
    }
    float at(std::int64_t c, std::int64_t z, std::int64_t y, std::int64_t x) const {
        return data[static_cast<std::size_t>(index(c, z, y, x))];
    }
    float& at(std::int64_t c, std::int64_t z, std::int64_t y, std::int64_t x) {
        return data[static_cast<std::size_t>(index(c, z, y, x))];
    }

    std::array<std::int64_t, 3> spatial_shape() const { return {shape[1], shape[2], shape[3]}; }

    void validate() const;
};

/// 3D label volume restricted to the BraTS label set {0, 1, 2, 4}.
struct SegMask {
    std::array<std::int64_t, 3> shape{0, 0, 0};  // z, y, x
    std::array<float, 3> spacing{1.f, 1.f, 1.f};
    std::array<float, 16> affine{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
    std::vector<std::uint8_t> labels;

    SegMask() = default;
    SegMask(std::array<std::int64_t, 3> s, std::vector<std::uint8_t> l);

    std::int64_t index(std::int64_t z, std::int64_t y, std::int64_t x) const {
        return (z * shape[1] + y) * shape[2] + x;
    }
    std::uint8_t at(std::int64_t z, std::int64_t y, std::int64_t x) const {
        return labels[static_cast<std::size_t>(index(z, y, x))];
    }
    std::uint8_t& at(std::int64_t z, std::int64_t y, std::int64_t x) {
        return labels[static_cast<std::size_t>(index(z, y, x))];
    }

    void validate() const;
};

inline bool is_legal_label(std::uint8_t v) { return v == 0 || v == 1 || v == 2 || v == 4; }

enum class Grade { HGG, LGG, Unknown };

const char* grade_name(Grade g);
Grade grade_from_name(const std::string& name);

struct Case {
    std::string id;
    Volume volume;
    std::optional<SegMask> mask;
    Grade grade = Grade::Unknown;
};

}  // namespace voxaug

#endif
