// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Each criterion prints exactly one [PASS]/[FAIL] line with
// its runtime; the process exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "testutil.hpp"
#include "voxaug/batch.hpp"
#include "voxaug/losses.hpp"
#include "voxaug/metrics.hpp"
#include "voxaug/nifti.hpp"
#include "voxaug/pipeline.hpp"
#include "voxaug/stats.hpp"

using namespace voxaug;
namespace fs = std::filesystem;

namespace {

struct Harness {
    int failures = 0;

    void run(const std::string& name, double time_limit_s,
             const std::function<std::string()>& body) {
        auto start = std::chrono::steady_clock::now();
        std::string problem;
        try {
            problem = body();
        } catch (const std::exception& e) {
            problem = std::string("exception: ") + e.what();
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (problem.empty() && time_limit_s > 0 && elapsed > time_limit_s) {
            std::ostringstream s;
            s << "runtime " << elapsed << "s exceeds " << time_limit_s << "s";
            problem = s.str();
        }
        if (problem.empty()) {
            std::printf("[PASS] %s (%.2fs)\n", name.c_str(), elapsed);
        } else {
            std::printf("[FAIL] %s (%.2fs): %s\n", name.c_str(), elapsed, problem.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
};

std::string check(bool ok, const std::string& message) { return ok ? "" : message; }

std::string math_kernel() {
    const double lr = poly_lr({0.01, 300, 0.9}, 150);
    const double lr_expected = 0.01 * std::pow(0.5, 0.9);
    if (std::abs(lr - lr_expected) > 1e-9) return "poly_lr(150) off: " + std::to_string(lr);

    if (deep_supervision_loss({1.0, 1.0, 1.0}) != 1.75) return "deep_supervision([1,1,1]) != 1.75";

    if (std::abs(bce(Prediction{{0.5}}, Target({1.0})) - std::log(2.0)) > 1e-9)
        return "bce([1],[0.5]) != ln 2";

    RngStream rng(8, 0, 0);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng.uniform_int(12);
        std::vector<std::vector<double>> rows, hots;
        Prediction pred;
        std::vector<double> tgt;
        for (std::size_t i = 0; i < n; ++i) {
            double p = rng.uniform(0.01, 0.99);
            double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
            rows.push_back({p, 1.0 - p});
            hots.push_back({y, 1.0 - y});
            pred.probs.push_back(p);
            tgt.push_back(y);
        }
        if (std::abs(ce(rows, hots) - bce(pred, Target(tgt))) > 1e-7)
            return "two-class ce != bce on trial " + std::to_string(trial);
    }

    const double h = 1e-4;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + rng.uniform_int(10);
        Prediction pred;
        std::vector<double> tgt;
        for (std::size_t i = 0; i < n; ++i) {
            pred.probs.push_back(rng.uniform(0.05, 0.95));
            tgt.push_back(rng.bernoulli(0.5) ? 1.0 : 0.0);
        }
        Target target(tgt);
        auto gb = grad_bce(pred, target);
        auto gd = grad_dice(pred, target);
        for (std::size_t i = 0; i < n; ++i) {
            Prediction up = pred, down = pred;
            up.probs[i] += h;
            down.probs[i] -= h;
            double fd_b = (bce(up, target) - bce(down, target)) / (2 * h);
            double fd_d = (dice_loss(up, target) - dice_loss(down, target)) / (2 * h);
            if (std::abs(gb[i] - fd_b) > 1e-5 * std::max(1.0, std::abs(fd_b)))
                return "grad_bce vs finite differences diverged";
            if (std::abs(gd[i] - fd_d) > 1e-5 * std::max(1.0, std::abs(fd_d)))
                return "grad_dice vs finite differences diverged";
        }
    }
    return "";
}

std::string msr_spn_correctness() {
    // Bit-exact endpoints and per-voxel convexity on 1000 random pairs (16^3).
    for (std::uint64_t s = 0; s < 1000; ++s) {
        Volume x = testutil::random_volume(2 * s, {1, 16, 16, 16}, 0.2, 3.0);
        Volume r = testutil::random_volume(2 * s + 1, {1, 16, 16, 16}, 0.2, 3.0);
        if (mix_volumes(x, r, 0.0).data != x.data) return "alpha=0 not bit-exact";
        if (mix_volumes(x, r, 1.0).data != r.data) return "alpha=1 not bit-exact";

        RngStream rng(s, 0, 0);
        double alpha = rng.uniform(0.0, 1.0);
        Volume mixed = mix_volumes(x, r, alpha);
        for (std::size_t i = 0; i < mixed.data.size(); ++i) {
            float lo = std::min(x.data[i], r.data[i]);
            float hi = std::max(x.data[i], r.data[i]);
            if (mixed.data[i] < lo - 1e-6f || mixed.data[i] > hi + 1e-6f)
                return "convexity violated at pair " + std::to_string(s);
        }
    }

    // SPN conservation: exact multisets, per-slice sums within 1e-4 relative.
    for (std::uint64_t s = 0; s < 50; ++s) {
        Volume v = testutil::random_volume(5000 + s, {2, 4, 16, 16}, 0.2, 3.0);
        Permutation perm = make_spn_permutation(v.spatial_shape(), 1234 + s);
        Volume shuffled = shuffle_pixels(v, perm);
        RngStream rng(s, 1, 1);
        Volume out = spn(v, perm, rng, 0.37, 1.0);
        for (std::int64_t c = 0; c < 2; ++c)
            for (std::int64_t z = 0; z < 4; ++z) {
                std::vector<float> a, b;
                double sum_in = 0, sum_out = 0;
                for (std::int64_t y = 0; y < 16; ++y)
                    for (std::int64_t x = 0; x < 16; ++x) {
                        a.push_back(v.at(c, z, y, x));
                        b.push_back(shuffled.at(c, z, y, x));
                        sum_in += v.at(c, z, y, x);
                        sum_out += out.at(c, z, y, x);
                    }
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                if (a != b) return "shuffle changed a slice's value multiset";
                if (std::abs(sum_out - sum_in) > 1e-4 * std::abs(sum_in))
                    return "per-slice sum drifted beyond 1e-4 relative";
            }
    }

    // Shipped presets carry the published defaults.
    PipelineSpec msr_preset =
        load_pipeline_config(std::string(VOXAUG_PRESET_DIR) + "/baseline_msr.cfg");
    bool msr_ok = false;
    for (const TransformSpec& t : msr_preset.transforms)
        if (t.kind == TransformKind::Msr) msr_ok = (t.p == 0.5 && t.alpha == 1e-4);
    if (!msr_ok) return "baseline_msr.cfg does not carry p=0.5, alpha=1e-4";

    PipelineSpec spn_preset =
        load_pipeline_config(std::string(VOXAUG_PRESET_DIR) + "/baseline_spn.cfg");
    bool spn_ok = false;
    for (const TransformSpec& t : spn_preset.transforms)
        if (t.kind == TransformKind::Spn) spn_ok = (t.p == 1.0 && t.alpha == 1e-7);
    if (!spn_ok) return "baseline_spn.cfg does not carry p=1, alpha=1e-7";
    return "";
}

const char* kDeterminismPipeline = R"(
master_seed = 77
spn_permutation_seed = 5

[transform]
kind = normalize_nonzero

[transform]
kind = rand_scale_intensity
p = 0.3
factor_range = 0.1

[transform]
kind = rand_shift_intensity
p = 0.3
offset_range = 0.1

[transform]
kind = rand_spatial_crop
roi = 8 8 8

[transform]
kind = rand_flip_z
p = 0.3

[transform]
kind = rand_elastic_affine
p = 0.3
offset_range = 0.1 0.3
kernel_sigma_range = 0.1 0.3
shear_range = 0.1 0.3
grid_spacing = 4 4 4

[transform]
kind = gaussian_noise
p = 0.3
sigma = 0.1

[transform]
kind = msr
p = 1
alpha = 1e-4

[transform]
kind = spn
p = 1
alpha = 1e-7
)";

std::string directory_bytes(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::string all;
    for (const auto& f : files) {
        all += f.filename().string() + ":";
        all += testutil::slurp(f.string());
    }
    return all;
}

std::string pipeline_determinism() {
    testutil::TempDir dir("acceptance_determinism");
    for (int i = 0; i < 10; ++i) {
        std::string id = "syn" + std::to_string(100 + i);
        fs::path case_dir = dir.path() / (i % 3 ? "HGG" : "LGG") / id;
        fs::create_directories(case_dir);
        for (const char* mod : kModalities) {
            Volume v = testutil::random_volume(
                std::hash<std::string>{}(id + mod) & 0xFFFFF, {1, 16, 16, 16}, 0.2, 3.0);
            nifti::save_volume(v, (case_dir / (id + "_" + mod + ".nii.gz")).string());
        }
        SegMask m = testutil::random_mask(static_cast<std::uint64_t>(i) + 31, {16, 16, 16});
        nifti::save_mask(m, (case_dir / (id + "_seg.nii.gz")).string());
    }
    testutil::spit(dir.file("pipeline.cfg"), kDeterminismPipeline);
    cmd_index(dir.path().string(), "brats", true, dir.file("index.json"));

    auto run = [&dir](const char* out, int workers) {
        AugmentOptions options;
        options.workers = workers;
        CmdResult r = cmd_augment(dir.file("pipeline.cfg"), dir.file("index.json"), dir.file(out),
                                  options);
        if (!r.ok()) throw Error(ErrorCode::Internal, "augment failed: " + r.failures.front());
    };
    run("out_w1", 1);
    run("out_w8", 8);
    run("out_rerun", 8);

    std::string w1 = directory_bytes(dir.file("out_w1"));
    if (w1 != directory_bytes(dir.file("out_w8"))) return "workers 1 vs 8 differ";
    if (w1 != directory_bytes(dir.file("out_rerun"))) return "rerun differs";
    if (w1.find("provenance") == std::string::npos) return "provenance.json missing";
    return "";
}

std::string probability_gating() {
    PipelineSpec spec = parse_pipeline_config(
        "master_seed = 2024\n\n[transform]\nkind = rand_flip_z\np = 0.3\n");
    Case c;
    c.id = "gate";
    c.volume = Volume({1, 2, 2, 2}, std::vector<float>(8, 1.f));
    const int trials = 10000;
    int fired = 0;
    for (int i = 0; i < trials; ++i) {
        std::vector<TransformTrace> trace;
        run_pipeline(c, spec, static_cast<std::uint64_t>(i), nullptr, &trace);
        fired += trace[0].applied;
    }
    const double margin = 4.0 * std::sqrt(0.3 * 0.7 * trials);  // ~183.3
    std::ostringstream detail;
    detail << "fired " << fired << " of " << trials << ", allowed 3000 +/- " << margin;
    if (std::abs(fired - 3000.0) > margin) return detail.str();
    return "";
}

std::string normalization() {
    for (std::uint64_t s = 0; s < 25; ++s) {
        Volume v = testutil::random_volume(s, {3, 12, 12, 12}, 0.5, 5.0);
        for (std::int64_t z = 0; z < 5; ++z)
            for (std::int64_t y = 0; y < 5; ++y)
                for (std::int64_t x = 0; x < 5; ++x) v.at(s % 3, z, y, x) = 0.f;  // background block
        Volume out = normalize_nonzero(v);
        for (std::int64_t c = 0; c < 3; ++c) {
            double sum = 0, sq = 0;
            std::int64_t n = 0;
            for (std::int64_t i = 0; i < v.voxels_per_channel(); ++i) {
                std::size_t idx = static_cast<std::size_t>(c * v.voxels_per_channel() + i);
                if (v.data[idx] == 0.f) {
                    if (out.data[idx] != 0.f) return "background voxel not exactly 0";
                } else {
                    sum += out.data[idx];
                    sq += double(out.data[idx]) * out.data[idx];
                    ++n;
                }
            }
            double mean = sum / static_cast<double>(n);
            double std_pop = std::sqrt(sq / static_cast<double>(n) - mean * mean);
            if (std::abs(mean) >= 1e-5) return "non-zero mean " + std::to_string(mean);
            if (std::abs(std_pop - 1.0) >= 1e-4) return "non-zero std " + std::to_string(std_pop);
        }
    }
    return "";
}

std::string metrics_checks() {
    for (std::uint64_t s = 0; s < 1000; ++s) {
        SegMask m = testutil::random_mask(s, {4, 4, 4});
        auto regions = regions_from_mask(m);
        for (std::size_t i = 0; i < m.labels.size(); ++i)
            if (regions[2].mask[i] > regions[1].mask[i] || regions[1].mask[i] > regions[0].mask[i])
                return "region nesting violated at mask " + std::to_string(s);
    }

    // Hand-built fixture vs direct voxel counting.
    std::vector<std::uint8_t> pred_labels(64, 0), gt_labels(64, 0);
    for (int i = 0; i < 10; ++i) pred_labels[static_cast<std::size_t>(i)] = 1;
    for (int i = 5; i < 12; ++i) gt_labels[static_cast<std::size_t>(i)] = 1;
    for (int i = 20; i < 24; ++i) pred_labels[static_cast<std::size_t>(i)] = 4;
    for (int i = 22; i < 30; ++i) gt_labels[static_cast<std::size_t>(i)] = 4;
    std::map<std::string, SegMask> pred, gt;
    pred.emplace("f", SegMask({4, 4, 4}, pred_labels));
    gt.emplace("f", SegMask({4, 4, 4}, gt_labels));
    DiceReport report = evaluate(pred, gt);
    // WT: |pred|=14, |gt|=15, overlap {5..9} + {22,23} = 7 -> 14/29.
    // TC identical to WT here (labels 1 and 4 only). ET: |4|=4 vs 8, overlap 2.
    const double wt = 2.0 * 7.0 / 29.0;
    const double et = 2.0 * 2.0 / 12.0;
    const auto& scores = report.per_case.at("f");
    if (scores.dice[0] != wt) return "WT dice mismatch vs hand count";
    if (scores.dice[1] != wt) return "TC dice mismatch vs hand count";
    if (scores.dice[2] != et) return "ET dice mismatch vs hand count";

    // Both-empty convention fires with a flag.
    std::map<std::string, SegMask> empty_pred, empty_gt;
    empty_pred.emplace("e", SegMask({2, 2, 2}, std::vector<std::uint8_t>(8, 0)));
    empty_gt.emplace("e", SegMask({2, 2, 2}, std::vector<std::uint8_t>(8, 0)));
    DiceReport empty_report = evaluate(empty_pred, empty_gt);
    const auto& empty_scores = empty_report.per_case.at("e");
    for (int r = 0; r < 3; ++r) {
        if (empty_scores.dice[static_cast<std::size_t>(r)] != 1.0) return "both-empty dice != 1.0";
        if (!empty_scores.both_empty[static_cast<std::size_t>(r)]) return "both-empty flag not set";
    }
    return "";
}

std::string stats_checks() {
    for (std::uint64_t s = 0; s < 100; ++s) {
        RngStream rng(s, 3, 0);
        std::size_t n = 3 + rng.uniform_int(9);
        std::size_t k = 2 + rng.uniform_int(4);
        ScoreMatrix m;
        for (std::size_t i = 0; i < n; ++i) m.subjects.push_back("s" + std::to_string(i));
        for (std::size_t j = 0; j < k; ++j) m.conditions.push_back("c" + std::to_string(j));
        for (std::size_t i = 0; i < n * k; ++i) m.values.push_back(rng.uniform(0.2, 0.95));

        AnovaResult r = rm_anova(m);
        double grand = 0;
        for (double v : m.values) grand += v;
        grand /= static_cast<double>(m.values.size());
        double ss_total = 0;
        for (double v : m.values) ss_total += (v - grand) * (v - grand);
        if (std::abs(r.ss_conditions + r.ss_subjects + r.ss_error - ss_total) >
            1e-9 * std::max(ss_total, 1e-30))
            return "sum-of-squares decomposition broke at matrix " + std::to_string(s);

        if (k == 2) {
            PairedResult t = paired_comparison(m, "c0", "c1");
            double t2 = t.t_statistic * t.t_statistic;
            if (std::abs(r.f_statistic - t2) > 1e-9 * std::max(1.0, t2))
                return "F != t^2 on two conditions";
        }
    }

    // Frozen reference fixtures (independent oracle, 1e-6).
    {
        ScoreMatrix m;
        m.conditions = {"baseline", "gauss", "msr"};
        const double rows[5][3] = {{0.72, 0.75, 0.79},
                                   {0.64, 0.68, 0.66},
                                   {0.81, 0.85, 0.88},
                                   {0.57, 0.60, 0.63},
                                   {0.77, 0.81, 0.84}};
        for (int i = 0; i < 5; ++i) {
            m.subjects.push_back("s" + std::to_string(i));
            for (int j = 0; j < 3; ++j) m.values.push_back(rows[i][j]);
        }
        AnovaResult r = rm_anova(m);
        if (std::abs(r.f_statistic - 24.037383177569804) > 1e-6) return "anova F off the fixture";
        if (std::abs(r.p_value - 0.00041427626982717757) > 1e-6) return "anova p off the fixture";
    }
    {
        ScoreMatrix m;
        m.conditions = {"a", "b"};
        const double a[7] = {0.81, 0.76, 0.88, 0.70, 0.93, 0.84, 0.79};
        const double b[7] = {0.78, 0.74, 0.85, 0.72, 0.90, 0.80, 0.77};
        for (int i = 0; i < 7; ++i) {
            m.subjects.push_back("s" + std::to_string(i));
            m.values.push_back(a[i]);
            m.values.push_back(b[i]);
        }
        PairedResult r = paired_comparison(m, "a", "b");
        if (std::abs(r.t_statistic - 2.904737509655563) > 1e-6) return "paired t off the fixture";
        if (std::abs(r.p_value - 0.027166117541688774) > 1e-6) return "paired p off the fixture";
    }

    // Distribution CDFs at tabulated points, 1e-10 absolute.
    const struct { double x; std::int64_t df; double cdf; } t_points[] = {
        {2.0, 10, 0.96330598261462974},
        {0.5, 1, 0.64758361765043326},
        {-1.3, 7, 0.11738391769618858},
        {2.228, 10, 0.97499411409144432},
    };
    for (const auto& p : t_points)
        if (std::abs(t_cdf(p.x, p.df) - p.cdf) > 1e-10)
            return "t_cdf off at x=" + std::to_string(p.x);
    const struct { double x; std::int64_t d1, d2; double cdf; } f_points[] = {
        {2.5, 3, 12, 0.89084528760499371},
        {0.8, 5, 20, 0.43731193240966931},
        {4.0, 2, 18, 0.96346640464835076},
        {12.0, 1, 9, 0.99288537077048333},
    };
    for (const auto& p : f_points)
        if (std::abs(f_cdf(p.x, p.d1, p.d2) - p.cdf) > 1e-10)
            return "f_cdf off at x=" + std::to_string(p.x);
    return "";
}

DatasetIndex synthetic_index(std::size_t n_hgg, std::size_t n_lgg, std::size_t n_unknown = 0) {
    DatasetIndex idx;
    auto add = [&idx](const std::string& id, Grade grade) {
        IndexedCase c;
        c.id = id;
        c.grade = grade;
        for (auto& path : c.channel_paths) path = "/dev/null";
        idx.cases.push_back(std::move(c));
    };
    for (std::size_t i = 0; i < n_hgg; ++i) add("h" + std::to_string(1000 + i), Grade::HGG);
    for (std::size_t i = 0; i < n_lgg; ++i) add("l" + std::to_string(1000 + i), Grade::LGG);
    for (std::size_t i = 0; i < n_unknown; ++i) add("u" + std::to_string(1000 + i), Grade::Unknown);
    return idx;
}

std::string split_checks() {
    // 285 synthetic cases (213 HGG + 72 LGG) -> exactly 229/28/28.
    DatasetIndex brats_sized = synthetic_index(213, 72);
    Split split = stratified_split(brats_sized, {0.8, 0.1, 0.1}, 17);
    if (split.train.size() != 229 || split.validation.size() != 28 || split.test.size() != 28) {
        std::ostringstream s;
        s << "got " << split.train.size() << "/" << split.validation.size() << "/"
          << split.test.size() << " instead of 229/28/28";
        return s.str();
    }

    for (std::uint64_t s = 0; s < 100; ++s) {
        RngStream rng(s, 7, 0);
        std::size_t n_hgg = 3 + rng.uniform_int(80);
        std::size_t n_lgg = 3 + rng.uniform_int(80);
        DatasetIndex idx = synthetic_index(n_hgg, n_lgg);
        Split sp = stratified_split(idx, {0.8, 0.1, 0.1}, s * 31 + 7);

        std::set<std::string> all;
        for (const auto& bucket : {sp.train, sp.validation, sp.test})
            for (const auto& id : bucket)
                if (!all.insert(id).second) return "partitions overlap at trial " + std::to_string(s);
        if (all.size() != idx.cases.size()) return "partitions incomplete at trial " + std::to_string(s);

        auto stratum_count = [](const std::vector<std::string>& ids, char prefix) {
            std::size_t n = 0;
            for (const auto& id : ids) n += id[0] == prefix;
            return n;
        };
        const double ratios[3] = {0.8, 0.1, 0.1};
        const std::vector<std::string>* buckets[3] = {&sp.train, &sp.validation, &sp.test};
        for (const auto& [prefix, size] :
             std::vector<std::pair<char, std::size_t>>{{'h', n_hgg}, {'l', n_lgg}}) {
            for (int b = 0; b < 3; ++b) {
                double fraction =
                    static_cast<double>(stratum_count(*buckets[b], prefix)) / static_cast<double>(size);
                if (std::abs(fraction - ratios[b]) >= 1.0 / static_cast<double>(size))
                    return "stratum proportion bound violated at trial " + std::to_string(s);
            }
        }
    }
    return "";
}

std::string io_roundtrip() {
    testutil::TempDir dir("acceptance_io");
    for (std::uint64_t s = 0; s < 100; ++s) {
        std::array<std::int64_t, 4> shape{1 + static_cast<std::int64_t>(s % 3),
                                          2 + static_cast<std::int64_t>(s % 5),
                                          2 + static_cast<std::int64_t>(s % 4),
                                          2 + static_cast<std::int64_t>(s % 6)};
        Volume v = testutil::random_volume(s, shape);
        v.spacing = {0.5f + 0.01f * s, 1.0f, 1.25f};
        bool gz = s % 2 == 0;
        std::string path = dir.file("v" + std::to_string(s) + (gz ? ".nii.gz" : ".nii"));
        nifti::save_volume(v, path);
        Volume loaded = nifti::load_volume(path);
        if (loaded.shape != v.shape) return "shape changed at volume " + std::to_string(s);
        if (std::memcmp(loaded.data.data(), v.data.data(), v.data.size() * sizeof(float)) != 0)
            return "data not bit-exact at volume " + std::to_string(s);
    }
    return "";
}

}  // namespace

int main() {
    Harness harness;
    harness.run("math-kernel: schedule, losses, ce==bce, gradient checks", 1.0, math_kernel);
    harness.run("msr-spn: endpoints, convexity, conservation, preset defaults", 10.0,
                msr_spn_correctness);
    harness.run("pipeline-determinism: 10 cases, reruns and workers 1 vs 8", 30.0,
                pipeline_determinism);
    harness.run("probability-gating: p=0.3 over 10000 seeded trials", 0.0, probability_gating);
    harness.run("normalization: nonzero mean/std and exact background", 0.0, normalization);
    harness.run("metrics: region nesting, dice vs voxel-count oracle, both-empty", 0.0,
                metrics_checks);
    harness.run("stats: ss decomposition, F==t^2, frozen fixtures, cdf tables", 0.0, stats_checks);
    harness.run("split: 285 -> 229/28/28, partitioning, stratification bound", 0.0, split_checks);
    harness.run("io: save/load round trip bit-exact incl. gzip", 0.0, io_roundtrip);

    if (harness.failures > 0) {
        std::printf("%d acceptance criterion(s) FAILED\n", harness.failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
