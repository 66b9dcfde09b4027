// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXAUG_METRICS_HPP
#define VOXAUG_METRICS_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "voxaug/types.hpp"

namespace voxaug {

enum class Region { WT, TC, ET };
inline constexpr std::array<Region, 3> kRegions{Region::WT, Region::TC, Region::ET};
const char* region_name(Region r);

/// Boolean region derived from a label map. The three regions nest:
/// ET (label 4) ⊆ TC (labels 1,4) ⊆ WT (labels 1,2,4).
struct RegionMask {
    Region region = Region::WT;
    std::array<std::int64_t, 3> shape{0, 0, 0};
    std::vector<std::uint8_t> mask;  // 0/1
};

std::array<RegionMask, 3> regions_from_mask(const SegMask& m);

/// 2|a∩b| / (|a|+|b|); 1.0 when both masks are empty (flag reported where a
/// report is assembled).
double dice_score(const RegionMask& a, const RegionMask& b);

struct RegionScores {
    std::array<double, 3> dice{0, 0, 0};          // WT, TC, ET
    std::array<bool, 3> both_empty{false, false, false};
};

struct DiceReport {
    std::map<std::string, RegionScores> per_case;
    std::array<double, 3> per_region_mean{0, 0, 0};
    double overall_mean = 0.0;
};

DiceReport evaluate(const std::map<std::string, SegMask>& pred_masks,
                    const std::map<std::string, SegMask>& gt_masks);

std::string dice_report_to_csv(const DiceReport& report);
std::string dice_report_to_json(const DiceReport& report);
DiceReport dice_report_from_csv(const std::string& csv_text);

}  // namespace voxaug

#endif
