// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0
//
// Batch CLI over the voxaug C API: index, split, augment, evaluate, analyze
// and verify-math subcommands with deterministic outputs.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "voxaug.h"

namespace {

int fail(vx_status status) {
    std::fprintf(stderr, "error (%d): %s\n", static_cast<int>(status), vx_last_error());
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic volumetric augmentation and evaluation toolkit"};
    app.require_subcommand(1);

    // Common flags; environment variables with the APP_ prefix mirror them.
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;
    std::string format = "csv,json";

    auto add_common = [&](CLI::App* cmd, bool with_format) {
        cmd->add_option("--out", out_dir, "Output directory or file")->envname("APP_OUT");
        cmd->add_option("--seed", seed, "Master seed override")
            ->envname("APP_SEED")
            ->each([&seed_given](const std::string&) { seed_given = true; });
        cmd->add_option("--workers", workers, "Worker threads (0 = all cores)")->envname("APP_WORKERS");
        if (with_format)
            cmd->add_option("--format", format, "Report format: csv|json|csv,json")->envname("APP_FORMAT");
    };

    // index
    auto* cmd_index = app.add_subcommand("index", "Scan a dataset directory into a manifest");
    std::string root, layout = "brats";
    bool require_masks = false;
    cmd_index->add_option("root", root, "Dataset root directory")->required();
    cmd_index->add_option("--layout", layout, "Naming convention: brats|flat");
    cmd_index->add_flag("--require-masks", require_masks, "Fail on cases without a segmentation");
    add_common(cmd_index, false);

    // split
    auto* cmd_split = app.add_subcommand("split", "Stratified train/validation/test split");
    std::string index_path;
    std::vector<double> ratios{0.8, 0.1, 0.1};
    cmd_split->add_option("index", index_path, "Index manifest JSON")->required();
    cmd_split->add_option("--ratios", ratios, "Train validation test ratios")->expected(3);
    add_common(cmd_split, false);

    // augment
    auto* cmd_augment = app.add_subcommand("augment", "Run the transform pipeline over a dataset");
    std::string config_path, augment_index;
    cmd_augment->add_option("--config", config_path, "Pipeline config file")
        ->envname("APP_CONFIG")
        ->required();
    cmd_augment->add_option("index", augment_index, "Index manifest JSON")->required();
    add_common(cmd_augment, false);

    // evaluate
    auto* cmd_evaluate = app.add_subcommand("evaluate", "Per-region dice of predictions vs ground truth");
    std::string pred_dir, gt_dir;
    cmd_evaluate->add_option("pred", pred_dir, "Directory of predicted masks")->required();
    cmd_evaluate->add_option("gt", gt_dir, "Directory of ground-truth masks")->required();
    add_common(cmd_evaluate, true);

    // analyze
    auto* cmd_analyze = app.add_subcommand("analyze", "Repeated-measures comparison of conditions");
    std::vector<std::string> report_args;
    cmd_analyze
        ->add_option("--report", report_args, "Condition report as name=dice_report.csv (repeatable)")
        ->required();
    add_common(cmd_analyze, false);

    // verify-math
    auto* cmd_verify = app.add_subcommand("verify-math", "Check the closed-form math kernel");

    CLI11_PARSE(app, argc, argv);

    if (cmd_index->parsed()) {
        std::string out = out_dir == "." ? "index.json" : out_dir;
        vx_status s = vx_cmd_index(root.c_str(), layout.c_str(), require_masks ? 1 : 0, out.c_str());
        if (s != VX_OK) return fail(s);
        std::printf("wrote %s\n", out.c_str());
        return 0;
    }

    if (cmd_split->parsed()) {
        std::string out = out_dir == "." ? "split.json" : out_dir;
        vx_status s = vx_cmd_split(index_path.c_str(), ratios[0], ratios[1], ratios[2], seed,
                                   out.c_str());
        if (s != VX_OK) return fail(s);
        std::printf("wrote %s\n", out.c_str());
        return 0;
    }

    if (cmd_augment->parsed()) {
        int n_failed = 0;
        const std::uint64_t* seed_ptr = seed_given ? &seed : nullptr;
        vx_status s = vx_cmd_augment(config_path.c_str(), augment_index.c_str(), out_dir.c_str(),
                                     workers, seed_ptr, &n_failed);
        if (s != VX_OK) {
            std::fprintf(stderr, "%d case(s) failed: %s\n", n_failed, vx_last_error());
            return 1;
        }
        std::printf("augmented dataset written to %s\n", out_dir.c_str());
        return 0;
    }

    if (cmd_evaluate->parsed()) {
        vx_status s = vx_cmd_evaluate(pred_dir.c_str(), gt_dir.c_str(), out_dir.c_str(), format.c_str());
        if (s != VX_OK) return fail(s);
        std::printf("dice report written to %s\n", out_dir.c_str());
        return 0;
    }

    if (cmd_analyze->parsed()) {
        std::vector<std::string> names, paths;
        for (const std::string& arg : report_args) {
            std::size_t eq = arg.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
                std::fprintf(stderr, "bad --report '%s' (want name=path.csv)\n", arg.c_str());
                return 1;
            }
            names.push_back(arg.substr(0, eq));
            paths.push_back(arg.substr(eq + 1));
        }
        std::vector<const char*> name_ptrs, path_ptrs;
        for (const std::string& n : names) name_ptrs.push_back(n.c_str());
        for (const std::string& p : paths) path_ptrs.push_back(p.c_str());
        vx_status s = vx_cmd_analyze(name_ptrs.data(), path_ptrs.data(), name_ptrs.size(),
                                     out_dir.c_str());
        if (s != VX_OK) return fail(s);
        std::printf("stats written to %s\n", out_dir.c_str());
        return 0;
    }

    if (cmd_verify->parsed()) {
        char* report = nullptr;
        int n_failed = 0;
        vx_status s = vx_cmd_verify_math(&report, &n_failed);
        if (report) {
            std::fputs(report, stdout);
            vx_string_free(report);
        }
        if (s != VX_OK || n_failed > 0) {
            std::fprintf(stderr, "%d math check(s) failed\n", n_failed);
            return 1;
        }
        std::printf("all math checks passed\n");
        return 0;
    }

    return 1;
}
