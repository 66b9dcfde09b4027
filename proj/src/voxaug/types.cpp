// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include "voxaug/types.hpp"

#include <cmath>

namespace voxaug {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::UnsupportedDatatype: return "UnsupportedDatatype";
        case ErrorCode::NonFiniteData: return "NonFiniteData";
        case ErrorCode::IllegalLabel: return "IllegalLabel";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::DegenerateChannel: return "DegenerateChannel";
        case ErrorCode::RoiTooLarge: return "RoiTooLarge";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::EmptyPool: return "EmptyPool";
        case ErrorCode::PermutationShapeMismatch: return "PermutationShapeMismatch";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::EpochOutOfRange: return "EpochOutOfRange";
        case ErrorCode::CaseSetMismatch: return "CaseSetMismatch";
        case ErrorCode::IncompleteMatrix: return "IncompleteMatrix";
        case ErrorCode::ZeroVarianceDifferences: return "ZeroVarianceDifferences";
        case ErrorCode::InvalidDf: return "InvalidDf";
        case ErrorCode::MissingChannel: return "MissingChannel";
        case ErrorCode::MissingMask: return "MissingMask";
        case ErrorCode::EmptyStratum: return "EmptyStratum";
        case ErrorCode::ConfigParse: return "ConfigParse";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

Volume::Volume(std::array<std::int64_t, 4> s, std::vector<float> d) : shape(s), data(std::move(d)) {
    validate();
}

void Volume::validate() const {
    std::int64_t product = 1;
    for (auto extent : shape) {
        if (extent < 1) throw Error(ErrorCode::InvalidArgument, "volume extents must be >= 1");
        product *= extent;
    }
    if (static_cast<std::int64_t>(data.size()) != product)
        throw Error(ErrorCode::InvalidArgument, "volume data length does not match shape product");
    for (float s : spacing)
        if (!(s > 0.f)) throw Error(ErrorCode::InvalidArgument, "voxel spacing must be positive");
    if (!channel_names.empty() && static_cast<std::int64_t>(channel_names.size()) != shape[0])
        throw Error(ErrorCode::InvalidArgument, "channel_names length does not match channel extent");
}

SegMask::SegMask(std::array<std::int64_t, 3> s, std::vector<std::uint8_t> l)
    : shape(s), labels(std::move(l)) {
    validate();
}

void SegMask::validate() const {
    std::int64_t product = 1;
    for (auto extent : shape) {
        if (extent < 1) throw Error(ErrorCode::InvalidArgument, "mask extents must be >= 1");
        product *= extent;
    }
    if (static_cast<std::int64_t>(labels.size()) != product)
        throw Error(ErrorCode::InvalidArgument, "mask label length does not match shape product");
    for (std::uint8_t v : labels)
        if (!is_legal_label(v))
            throw Error(ErrorCode::IllegalLabel, "label " + std::to_string(int(v)) + " outside {0,1,2,4}");
}

const char* grade_name(Grade g) {
    switch (g) {
        case Grade::HGG: return "HGG";
        case Grade::LGG: return "LGG";
        case Grade::Unknown: return "Unknown";
    }
    return "Unknown";
}

Grade grade_from_name(const std::string& name) {
    if (name == "HGG" || name == "hgg") return Grade::HGG;
    if (name == "LGG" || name == "lgg") return Grade::LGG;
    return Grade::Unknown;
}

}  // namespace voxaug
