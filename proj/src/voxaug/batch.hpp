// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXAUG_BATCH_HPP
#define VOXAUG_BATCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voxaug/dataset.hpp"
#include "voxaug/pipeline.hpp"

namespace voxaug {

struct CmdResult {
    int cases_processed = 0;
    std::vector<std::string> failures;  // "case: message"
    bool ok() const { return failures.empty(); }
};

/// Scans a dataset root and writes the index manifest JSON.
CmdResult cmd_index(const std::string& root, const std::string& layout, bool require_masks,
                    const std::string& out_path);

/// Splits an index manifest and writes the split manifest JSON.
CmdResult cmd_split(const std::string& index_path, const SplitRatios& ratios, std::uint64_t seed,
                    const std::string& out_path);

struct AugmentOptions {
    int workers = 0;  // 0 = hardware concurrency
    std::optional<std::uint64_t> seed_override;
};

/// Runs the pipeline over every indexed case, writing augmented volumes (and
/// masks when present) plus provenance.json into out_dir. Outputs are
/// byte-identical for a fixed config regardless of worker count.
CmdResult cmd_augment(const std::string& config_path, const std::string& index_path,
                      const std::string& out_dir, const AugmentOptions& options = {});

/// Dice evaluation of prediction masks against ground truth; writes
/// dice_report.csv and/or dice_report.json ("csv", "json" or "csv,json").
CmdResult cmd_evaluate(const std::string& pred_dir, const std::string& gt_dir,
                       const std::string& out_dir, const std::string& format = "csv,json");

/// Repeated-measures analysis across >= 2 condition reports (dice CSVs with
/// identical case sets); writes stats.json and boxplots.csv per region.
CmdResult cmd_analyze(const std::vector<std::pair<std::string, std::string>>& condition_reports,
                      const std::string& out_dir);

struct VerifyMathResult {
    std::string report;
    int checks_run = 0;
    int checks_failed = 0;
};

/// Runs the closed-form math checks (loss values, schedule, gradients vs
/// finite differences) and reports expected/got/tolerance per line.
VerifyMathResult cmd_verify_math();

}  // namespace voxaug

#endif
