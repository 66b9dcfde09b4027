// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXAUG_DATASET_HPP
#define VOXAUG_DATASET_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voxaug/types.hpp"

namespace voxaug {

inline constexpr std::array<const char*, 4> kModalities{"t1", "t1ce", "t2", "flair"};

struct IndexedCase {
    std::string id;
    std::array<std::string, 4> channel_paths;  // t1, t1ce, t2, flair
    std::optional<std::string> mask_path;
    Grade grade = Grade::Unknown;
};

/// Case table discovered on disk, sorted by id.
struct DatasetIndex {
    std::vector<IndexedCase> cases;

    const IndexedCase& by_id(const std::string& id) const;
    std::vector<std::string> ids() const;
};

enum class DatasetLayout {
    Brats,  // <root>/<HGG|LGG>/<case>/<case>_<modality>.nii[.gz], grade from the subdirectory
    Flat,   // <root>/<case>_<modality>.nii[.gz], optional <case>.grade sidecar
};

DatasetLayout layout_from_name(const std::string& name);

DatasetIndex build_index(const std::string& root, DatasetLayout layout, bool require_masks = false);

std::string index_to_json(const DatasetIndex& idx);
DatasetIndex index_from_json(const std::string& json_text);

struct SplitRatios {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

struct Split {
    std::vector<std::string> train;
    std::vector<std::string> validation;
    std::vector<std::string> test;
    std::uint64_t seed = 0;
};

/// Stratified by grade: within each stratum ids are shuffled by the seed and
/// partitioned by largest-remainder rounding (ties broken toward train, then
/// validation), so each partition receives floor(quota) or floor(quota)+1
/// cases and per-stratum proportions stay within 1/|stratum| of the ratios.
Split stratified_split(const DatasetIndex& idx, const SplitRatios& ratios, std::uint64_t seed);

std::string split_to_json(const Split& split);
Split split_from_json(const std::string& json_text);

}  // namespace voxaug

#endif
