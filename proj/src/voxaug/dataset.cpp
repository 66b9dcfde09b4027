// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include "voxaug/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "voxaug/rng.hpp"

namespace fs = std::filesystem;

namespace voxaug {

const IndexedCase& DatasetIndex::by_id(const std::string& id) const {
    for (const IndexedCase& c : cases)
        if (c.id == id) return c;
    throw Error(ErrorCode::NotFound, "case '" + id + "' not in index");
}

std::vector<std::string> DatasetIndex::ids() const {
    std::vector<std::string> out;
    out.reserve(cases.size());
    for (const IndexedCase& c : cases) out.push_back(c.id);
    return out;
}

DatasetLayout layout_from_name(const std::string& name) {
    if (name == "brats") return DatasetLayout::Brats;
    if (name == "flat") return DatasetLayout::Flat;
    throw Error(ErrorCode::InvalidArgument, "unknown dataset layout '" + name + "' (brats|flat)");
}

namespace {

// <case>_<modality>.nii or .nii.gz -> (case, modality)
std::optional<std::pair<std::string, std::string>> parse_volume_name(const std::string& filename) {
    std::string stem = filename;
    if (stem.size() > 3 && stem.compare(stem.size() - 3, 3, ".gz") == 0)
        stem = stem.substr(0, stem.size() - 3);
    if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".nii") == 0)
        stem = stem.substr(0, stem.size() - 4);
    else
        return std::nullopt;
    std::size_t underscore = stem.rfind('_');
    if (underscore == std::string::npos || underscore == 0) return std::nullopt;
    return std::make_pair(stem.substr(0, underscore), stem.substr(underscore + 1));
}

struct PartialCase {
    std::map<std::string, std::string> files;  // modality/seg -> path
    Grade grade = Grade::Unknown;
};

void scan_case_files(const fs::path& dir, Grade grade,
                     std::map<std::string, PartialCase>& found) {
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto parsed = parse_volume_name(entry.path().filename().string());
        if (!parsed) continue;
        PartialCase& pc = found[parsed->first];
        pc.files[parsed->second] = entry.path().string();
        if (grade != Grade::Unknown) pc.grade = grade;
    }
}

IndexedCase finalize_case(const std::string& id, const PartialCase& pc, bool require_masks) {
    IndexedCase c;
    c.id = id;
    c.grade = pc.grade;
    for (std::size_t i = 0; i < kModalities.size(); ++i) {
        auto it = pc.files.find(kModalities[i]);
        if (it == pc.files.end())
            throw Error(ErrorCode::MissingChannel,
                        "case '" + id + "' lacks modality '" + kModalities[i] + "'");
        c.channel_paths[i] = it->second;
    }
    if (auto it = pc.files.find("seg"); it != pc.files.end()) c.mask_path = it->second;
    if (require_masks && !c.mask_path)
        throw Error(ErrorCode::MissingMask, "case '" + id + "' lacks a segmentation mask");
    return c;
}

}  // namespace

DatasetIndex build_index(const std::string& root, DatasetLayout layout, bool require_masks) {
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw Error(ErrorCode::NotFound, "dataset root is not a directory: " + root);

    std::map<std::string, PartialCase> found;
    if (layout == DatasetLayout::Brats) {
        for (const char* grade_dir : {"HGG", "LGG"}) {
            fs::path stratum = fs::path(root) / grade_dir;
            if (!fs::is_directory(stratum, ec)) continue;
            for (const auto& entry : fs::directory_iterator(stratum)) {
                if (!entry.is_directory()) continue;
                scan_case_files(entry.path(), grade_from_name(grade_dir), found);
            }
        }
    } else {
        scan_case_files(root, Grade::Unknown, found);
        for (auto& [id, pc] : found) {
            fs::path sidecar = fs::path(root) / (id + ".grade");
            if (fs::is_regular_file(sidecar, ec)) {
                std::ifstream in(sidecar);
                std::string grade;
                in >> grade;
                pc.grade = grade_from_name(grade);
            }
        }
    }

    DatasetIndex idx;
    for (const auto& [id, pc] : found) idx.cases.push_back(finalize_case(id, pc, require_masks));
    std::sort(idx.cases.begin(), idx.cases.end(),
              [](const IndexedCase& a, const IndexedCase& b) { return a.id < b.id; });
    return idx;
}

std::string index_to_json(const DatasetIndex& idx) {
    nlohmann::json j;
    j["cases"] = nlohmann::json::array();
    for (const IndexedCase& c : idx.cases) {
        nlohmann::json entry;
        entry["id"] = c.id;
        entry["grade"] = grade_name(c.grade);
        for (std::size_t i = 0; i < kModalities.size(); ++i)
            entry["channels"][kModalities[i]] = c.channel_paths[i];
        if (c.mask_path) entry["mask"] = *c.mask_path;
        j["cases"].push_back(entry);
    }
    return j.dump(2) + "\n";
}

DatasetIndex index_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded() || !j.contains("cases") || !j["cases"].is_array())
        throw Error(ErrorCode::MalformedHeader, "index manifest is not valid JSON with a 'cases' array");
    DatasetIndex idx;
    std::set<std::string> seen;
    for (const auto& entry : j["cases"]) {
        IndexedCase c;
        c.id = entry.at("id").get<std::string>();
        if (!seen.insert(c.id).second)
            throw Error(ErrorCode::MalformedHeader, "duplicate case id in manifest: " + c.id);
        c.grade = grade_from_name(entry.value("grade", "Unknown"));
        for (std::size_t i = 0; i < kModalities.size(); ++i)
            c.channel_paths[i] = entry.at("channels").at(kModalities[i]).get<std::string>();
        if (entry.contains("mask")) c.mask_path = entry["mask"].get<std::string>();
        idx.cases.push_back(std::move(c));
    }
    std::sort(idx.cases.begin(), idx.cases.end(),
              [](const IndexedCase& a, const IndexedCase& b) { return a.id < b.id; });
    return idx;
}

namespace {

// Largest-remainder apportionment of |ids| into three partitions; ties go to
// the earlier partition.
std::array<std::size_t, 3> apportion(std::size_t count, const SplitRatios& ratios) {
    const double quota[3] = {ratios.train * static_cast<double>(count),
                             ratios.validation * static_cast<double>(count),
                             ratios.test * static_cast<double>(count)};
    std::array<std::size_t, 3> sizes{};
    double remainder[3];
    std::size_t assigned = 0;
    for (int p = 0; p < 3; ++p) {
        sizes[p] = static_cast<std::size_t>(std::floor(quota[p] + 1e-9));
        remainder[p] = quota[p] - static_cast<double>(sizes[p]);
        assigned += sizes[p];
    }
    if (assigned > count)
        throw Error(ErrorCode::Internal, "apportionment assigned more cases than exist");
    std::size_t leftover = count - assigned;
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&remainder](int a, int b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; i < leftover; ++i) ++sizes[static_cast<std::size_t>(order[i % 3])];
    return sizes;
}

}  // namespace

Split stratified_split(const DatasetIndex& idx, const SplitRatios& ratios, std::uint64_t seed) {
    for (double r : {ratios.train, ratios.validation, ratios.test})
        if (r < 0.0) throw Error(ErrorCode::InvalidArgument, "split ratios must be >= 0");
    if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidArgument, "split ratios must sum to 1");
    if (idx.cases.empty()) throw Error(ErrorCode::EmptyStratum, "dataset index is empty");

    std::map<Grade, std::vector<std::string>> strata;
    for (const IndexedCase& c : idx.cases) strata[c.grade].push_back(c.id);

    Split split;
    split.seed = seed;
    std::uint64_t stratum_index = 0;
    for (auto& [grade, ids] : strata) {
        if (ids.empty()) throw Error(ErrorCode::EmptyStratum, "empty stratum");
        std::sort(ids.begin(), ids.end());
        RngStream rng(seed, stratum_index++, 0);
        for (std::size_t i = ids.size() - 1; i > 0; --i) {
            auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
            std::swap(ids[i], ids[j]);
        }
        const auto sizes = apportion(ids.size(), ratios);
        std::size_t cursor = 0;
        for (std::size_t i = 0; i < sizes[0]; ++i) split.train.push_back(ids[cursor++]);
        for (std::size_t i = 0; i < sizes[1]; ++i) split.validation.push_back(ids[cursor++]);
        for (std::size_t i = 0; i < sizes[2]; ++i) split.test.push_back(ids[cursor++]);
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::string split_to_json(const Split& split) {
    nlohmann::json j;
    j["train"] = split.train;
    j["validation"] = split.validation;
    j["test"] = split.test;
    j["seed"] = split.seed;
    return j.dump(2) + "\n";
}

Split split_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded())
        throw Error(ErrorCode::MalformedHeader, "split manifest is not valid JSON");
    Split split;
    split.train = j.at("train").get<std::vector<std::string>>();
    split.validation = j.at("validation").get<std::vector<std::string>>();
    split.test = j.at("test").get<std::vector<std::string>>();
    split.seed = j.value("seed", 0ull);
    return split;
}

}  // namespace voxaug
