// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include "voxaug/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace voxaug {

const char* region_name(Region r) {
    switch (r) {
        case Region::WT: return "WT";
        case Region::TC: return "TC";
        case Region::ET: return "ET";
    }
    return "?";
}

std::array<RegionMask, 3> regions_from_mask(const SegMask& m) {
    std::array<RegionMask, 3> out;
    for (int r = 0; r < 3; ++r) {
        out[r].region = kRegions[r];
        out[r].shape = m.shape;
        out[r].mask.resize(m.labels.size());
    }
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        std::uint8_t label = m.labels[i];
        out[0].mask[i] = label == 1 || label == 2 || label == 4;  // whole tumor
        out[1].mask[i] = label == 1 || label == 4;                // tumor core
        out[2].mask[i] = label == 4;                              // enhancing tumor
    }
    return out;
}

double dice_score(const RegionMask& a, const RegionMask& b) {
    if (a.shape != b.shape)
        throw Error(ErrorCode::ShapeMismatch, "dice_score requires equal shapes");
    std::int64_t intersection = 0, size_a = 0, size_b = 0;
    for (std::size_t i = 0; i < a.mask.size(); ++i) {
        size_a += a.mask[i] != 0;
        size_b += b.mask[i] != 0;
        intersection += (a.mask[i] != 0) && (b.mask[i] != 0);
    }
    if (size_a + size_b == 0) return 1.0;  // agreement on absence
    return 2.0 * static_cast<double>(intersection) / static_cast<double>(size_a + size_b);
}

DiceReport evaluate(const std::map<std::string, SegMask>& pred_masks,
                    const std::map<std::string, SegMask>& gt_masks) {
    if (pred_masks.size() != gt_masks.size())
        throw Error(ErrorCode::CaseSetMismatch,
                    "prediction and ground-truth case counts differ (" +
                        std::to_string(pred_masks.size()) + " vs " + std::to_string(gt_masks.size()) + ")");
    for (const auto& [id, unused] : pred_masks)
        if (!gt_masks.count(id))
            throw Error(ErrorCode::CaseSetMismatch, "case '" + id + "' missing from ground truth");
    if (pred_masks.empty()) throw Error(ErrorCode::EmptyInput, "no cases to evaluate");

    DiceReport report;
    std::array<double, 3> sums{0, 0, 0};
    for (const auto& [id, pred] : pred_masks) {
        const SegMask& gt = gt_masks.at(id);
        if (pred.shape != gt.shape)
            throw Error(ErrorCode::ShapeMismatch, "case '" + id + "': prediction shape differs from ground truth");
        auto pred_regions = regions_from_mask(pred);
        auto gt_regions = regions_from_mask(gt);
        RegionScores scores;
        for (int r = 0; r < 3; ++r) {
            scores.dice[r] = dice_score(pred_regions[r], gt_regions[r]);
            bool pred_empty = true, gt_empty = true;
            for (auto v : pred_regions[r].mask)
                if (v) { pred_empty = false; break; }
            for (auto v : gt_regions[r].mask)
                if (v) { gt_empty = false; break; }
            scores.both_empty[r] = pred_empty && gt_empty;
            sums[r] += scores.dice[r];
        }
        report.per_case.emplace(id, scores);
    }
    const auto n = static_cast<double>(report.per_case.size());
    for (int r = 0; r < 3; ++r) report.per_region_mean[r] = sums[r] / n;
    report.overall_mean =
        (report.per_region_mean[0] + report.per_region_mean[1] + report.per_region_mean[2]) / 3.0;
    return report;
}

namespace {

std::string format_score(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

}  // namespace

std::string dice_report_to_csv(const DiceReport& report) {
    std::ostringstream out;
    out << "case_id,WT,TC,ET\n";
    for (const auto& [id, scores] : report.per_case)
        out << id << "," << format_score(scores.dice[0]) << "," << format_score(scores.dice[1])
            << "," << format_score(scores.dice[2]) << "\n";
    return out.str();
}

std::string dice_report_to_json(const DiceReport& report) {
    nlohmann::json j;
    for (const auto& [id, scores] : report.per_case) {
        nlohmann::json entry;
        for (int r = 0; r < 3; ++r) {
            entry[region_name(kRegions[r])] = scores.dice[r];
            if (scores.both_empty[r])
                entry["both_empty"].push_back(region_name(kRegions[r]));
        }
        j["per_case"][id] = entry;
    }
    for (int r = 0; r < 3; ++r) j["per_region_mean"][region_name(kRegions[r])] = report.per_region_mean[r];
    j["overall_mean"] = report.overall_mean;
    return j.dump(2) + "\n";
}

DiceReport dice_report_from_csv(const std::string& csv_text) {
    DiceReport report;
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("case_id,WT,TC,ET", 0) != 0)
        throw Error(ErrorCode::MalformedHeader, "dice CSV must start with 'case_id,WT,TC,ET'");
    std::array<double, 3> sums{0, 0, 0};
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        std::string id, wt, tc, et;
        if (!std::getline(row, id, ',') || !std::getline(row, wt, ',') ||
            !std::getline(row, tc, ',') || !std::getline(row, et))
            throw Error(ErrorCode::MalformedHeader, "bad dice CSV row: " + line);
        RegionScores scores;
        try {
            scores.dice = {std::stod(wt), std::stod(tc), std::stod(et)};
        } catch (const std::exception&) {
            throw Error(ErrorCode::MalformedHeader, "non-numeric dice value in row: " + line);
        }
        if (report.per_case.count(id))
            throw Error(ErrorCode::MalformedHeader, "duplicate case id in dice CSV: " + id);
        for (int r = 0; r < 3; ++r) sums[r] += scores.dice[r];
        report.per_case.emplace(id, scores);
    }
    if (report.per_case.empty()) throw Error(ErrorCode::EmptyInput, "dice CSV has no rows");
    const auto n = static_cast<double>(report.per_case.size());
    for (int r = 0; r < 3; ++r) report.per_region_mean[r] = sums[r] / n;
    report.overall_mean =
        (report.per_region_mean[0] + report.per_region_mean[1] + report.per_region_mean[2]) / 3.0;
    return report;
}

}  // namespace voxaug
