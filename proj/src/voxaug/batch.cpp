// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include "voxaug/batch.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "voxaug/losses.hpp"
#include "voxaug/metrics.hpp"
#include "voxaug/nifti.hpp"
#include "voxaug/rng.hpp"
#include "voxaug/stats.hpp"

namespace fs = std::filesystem;

namespace voxaug {

namespace {

void write_text_file(const std::string& path, const std::string& content) {
    fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "cannot open: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

CmdResult cmd_index(const std::string& root, const std::string& layout, bool require_masks,
                    const std::string& out_path) {
    DatasetIndex idx = build_index(root, layout_from_name(layout), require_masks);
    write_text_file(out_path, index_to_json(idx));
    CmdResult result;
    result.cases_processed = static_cast<int>(idx.cases.size());
    return result;
}

CmdResult cmd_split(const std::string& index_path, const SplitRatios& ratios, std::uint64_t seed,
                    const std::string& out_path) {
    DatasetIndex idx = index_from_json(read_text_file(index_path));
    Split split = stratified_split(idx, ratios, seed);
    write_text_file(out_path, split_to_json(split));
    CmdResult result;
    result.cases_processed = static_cast<int>(idx.cases.size());
    return result;
}

namespace {

Volume load_stacked_case(const IndexedCase& c) {
    Volume stacked;
    for (std::size_t i = 0; i < c.channel_paths.size(); ++i) {
        Volume channel = nifti::load_volume(c.channel_paths[i]);
        if (channel.shape[0] != 1)
            throw Error(ErrorCode::ShapeMismatch,
                        "modality file is already multi-channel: " + c.channel_paths[i]);
        if (i == 0) {
            stacked = std::move(channel);
            stacked.data.reserve(stacked.data.size() * c.channel_paths.size());
        } else {
            if (channel.spatial_shape() != stacked.spatial_shape())
                throw Error(ErrorCode::ShapeMismatch,
                            "modalities of case '" + c.id + "' have differing shapes");
            stacked.data.insert(stacked.data.end(), channel.data.begin(), channel.data.end());
        }
    }
    stacked.shape[0] = static_cast<std::int64_t>(c.channel_paths.size());
    stacked.channel_names.assign(kModalities.begin(), kModalities.end());
    return stacked;
}

/// File-backed reference pool over the dataset index; loads are stateless so
/// concurrent case workers can share one provider.
class IndexReferenceProvider : public ReferenceProvider {
public:
    explicit IndexReferenceProvider(const DatasetIndex& idx) : index_(idx), ids_(idx.ids()) {}

    const std::vector<std::string>& ids() const override { return ids_; }

    Case load(const std::string& id) const override {
        const IndexedCase& c = index_.by_id(id);
        return Case{c.id, load_stacked_case(c), std::nullopt, c.grade};
    }

    std::uint64_t case_index(const std::string& id) const override {
        for (std::size_t i = 0; i < ids_.size(); ++i)
            if (ids_[i] == id) return i;
        throw Error(ErrorCode::NotFound, "case '" + id + "' not in index");
    }

private:
    const DatasetIndex& index_;
    std::vector<std::string> ids_;
};

nlohmann::json transform_params_json(const TransformSpec& t) {
    nlohmann::json j;
    j["kind"] = transform_kind_name(t.kind);
    j["p"] = t.p;
    switch (t.kind) {
        case TransformKind::NormalizeNonZero:
        case TransformKind::RandFlipZ: break;
        case TransformKind::RandScaleIntensity:
            j["factor_range"] = t.factor_range;
            j["per_channel"] = t.per_channel;
            break;
        case TransformKind::RandShiftIntensity:
            j["offset_range"] = t.offset_range;
            j["per_channel"] = t.per_channel;
            break;
        case TransformKind::RandSpatialCrop:
            j["roi"] = {t.roi[0], t.roi[1], t.roi[2]};
            break;
        case TransformKind::RandElasticAffine:
            j["offset_range"] = {t.elastic.offset_range.first, t.elastic.offset_range.second};
            j["kernel_sigma_range"] = {t.elastic.kernel_sigma_range.first,
                                       t.elastic.kernel_sigma_range.second};
            j["shear_range"] = {t.elastic.shear_range.first, t.elastic.shear_range.second};
            j["grid_spacing"] = {t.elastic.grid_spacing[0], t.elastic.grid_spacing[1],
                                 t.elastic.grid_spacing[2]};
            break;
        case TransformKind::GaussianNoise: j["sigma"] = t.sigma; break;
        case TransformKind::Msr:
            j["alpha"] = t.alpha;
            j["allow_self"] = t.allow_self;
            break;
        case TransformKind::Spn: j["alpha"] = t.alpha; break;
    }
    return j;
}

}  // namespace

CmdResult cmd_augment(const std::string& config_path, const std::string& index_path,
                      const std::string& out_dir, const AugmentOptions& options) {
    PipelineSpec spec = load_pipeline_config(config_path);
    if (options.seed_override) spec.master_seed = *options.seed_override;
    DatasetIndex idx = index_from_json(read_text_file(index_path));
    if (idx.cases.empty()) throw Error(ErrorCode::EmptyInput, "index manifest lists no cases");
    if (spec.has_kind(TransformKind::Msr)) {
        const auto& pool = spec.reference_pool.empty() ? idx.ids() : spec.reference_pool;
        if (pool.empty()) throw Error(ErrorCode::EmptyPool, "msr present but the reference pool is empty");
    }

    fs::create_directories(out_dir);
    IndexReferenceProvider provider(idx);

    struct CaseOutcome {
        std::vector<TransformTrace> trace;
        std::string error;
    };
    std::vector<CaseOutcome> outcomes(idx.cases.size());

    int workers = options.workers > 0 ? options.workers
                                      : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, static_cast<int>(idx.cases.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= idx.cases.size()) return;
            const IndexedCase& indexed = idx.cases[i];
            try {
                Case input{indexed.id, load_stacked_case(indexed), std::nullopt, indexed.grade};
                if (indexed.mask_path) input.mask = nifti::load_mask(*indexed.mask_path);

                Case output = run_pipeline(input, spec, static_cast<std::uint64_t>(i), &provider,
                                           &outcomes[i].trace);

                // One file per channel, mirroring the input granularity: an
                // empty pipeline reproduces its inputs byte for byte.
                for (std::int64_t c = 0; c < output.volume.channels(); ++c) {
                    Volume channel;
                    channel.shape = {1, output.volume.shape[1], output.volume.shape[2],
                                     output.volume.shape[3]};
                    channel.spacing = output.volume.spacing;
                    channel.affine = output.volume.affine;
                    const float* begin =
                        output.volume.data.data() + c * output.volume.voxels_per_channel();
                    channel.data.assign(begin, begin + output.volume.voxels_per_channel());
                    std::string channel_name =
                        static_cast<std::size_t>(c) < output.volume.channel_names.size()
                            ? output.volume.channel_names[static_cast<std::size_t>(c)]
                            : "ch" + std::to_string(c);
                    nifti::save_volume(channel, (fs::path(out_dir) / (indexed.id + "_" +
                                                                      channel_name + ".nii.gz"))
                                                    .string());
                }
                if (output.mask)
                    nifti::save_mask(*output.mask,
                                     (fs::path(out_dir) / (indexed.id + "_seg.nii.gz")).string());
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();

    // Provenance is assembled after the parallel phase, in case-id order, so
    // the file is identical no matter how work was scheduled.
    nlohmann::json prov;
    prov["master_seed"] = spec.master_seed;
    prov["spn_permutation_seed"] = spec.spn_permutation_seed;
    prov["pipeline"] = nlohmann::json::array();
    for (const TransformSpec& t : spec.transforms) prov["pipeline"].push_back(transform_params_json(t));

    CmdResult result;
    prov["cases"] = nlohmann::json::array();
    for (std::size_t i = 0; i < idx.cases.size(); ++i) {
        nlohmann::json entry;
        entry["id"] = idx.cases[i].id;
        entry["case_index"] = i;
        if (!outcomes[i].error.empty()) {
            entry["error"] = outcomes[i].error;
            result.failures.push_back(idx.cases[i].id + ": " + outcomes[i].error);
        } else {
            entry["transforms"] = nlohmann::json::array();
            for (const TransformTrace& trace : outcomes[i].trace) {
                nlohmann::json step;
                step["kind"] = transform_kind_name(trace.kind);
                step["applied"] = trace.applied;
                if (!trace.detail.empty()) step["detail"] = trace.detail;
                entry["transforms"].push_back(step);
            }
            ++result.cases_processed;
        }
        prov["cases"].push_back(entry);
    }
    write_text_file((fs::path(out_dir) / "provenance.json").string(), prov.dump(2) + "\n");
    return result;
}

namespace {

std::map<std::string, std::string> scan_mask_files(const std::string& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw Error(ErrorCode::NotFound, "not a directory: " + dir);
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        std::string stem = name;
        if (stem.size() > 3 && stem.compare(stem.size() - 3, 3, ".gz") == 0)
            stem = stem.substr(0, stem.size() - 3);
        if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".nii") == 0)
            stem = stem.substr(0, stem.size() - 4);
        else
            continue;
        if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, "_seg") == 0)
            stem = stem.substr(0, stem.size() - 4);
        out[stem] = entry.path().string();
    }
    return out;
}

}  // namespace

CmdResult cmd_evaluate(const std::string& pred_dir, const std::string& gt_dir,
                       const std::string& out_dir, const std::string& format) {
    auto pred_files = scan_mask_files(pred_dir);
    auto gt_files = scan_mask_files(gt_dir);
    for (const auto& [id, path] : pred_files)
        if (!gt_files.count(id))
            throw Error(ErrorCode::CaseSetMismatch, "case '" + id + "' has no ground truth");
    for (const auto& [id, path] : gt_files)
        if (!pred_files.count(id))
            throw Error(ErrorCode::CaseSetMismatch, "case '" + id + "' has no prediction");

    std::map<std::string, SegMask> pred_masks, gt_masks;
    for (const auto& [id, path] : pred_files) pred_masks.emplace(id, nifti::load_mask(path));
    for (const auto& [id, path] : gt_files) gt_masks.emplace(id, nifti::load_mask(path));

    DiceReport report = evaluate(pred_masks, gt_masks);

    fs::create_directories(out_dir);
    bool want_csv = format.find("csv") != std::string::npos;
    bool want_json = format.find("json") != std::string::npos;
    if (!want_csv && !want_json)
        throw Error(ErrorCode::InvalidArgument, "format must name csv and/or json");
    if (want_csv)
        write_text_file((fs::path(out_dir) / "dice_report.csv").string(), dice_report_to_csv(report));
    if (want_json)
        write_text_file((fs::path(out_dir) / "dice_report.json").string(), dice_report_to_json(report));

    CmdResult result;
    result.cases_processed = static_cast<int>(report.per_case.size());
    return result;
}

namespace {

std::string format_full(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

nlohmann::json anova_json(const AnovaResult& r) {
    nlohmann::json j;
    j["ss_conditions"] = r.ss_conditions;
    j["ss_subjects"] = r.ss_subjects;
    j["ss_error"] = r.ss_error;
    j["df_conditions"] = r.df_conditions;
    j["df_error"] = r.df_error;
    j["F"] = std::isfinite(r.f_statistic) ? nlohmann::json(r.f_statistic) : nlohmann::json("inf");
    j["p_value"] = r.p_value;
    j["degenerate"] = r.degenerate;
    return j;
}

}  // namespace

CmdResult cmd_analyze(const std::vector<std::pair<std::string, std::string>>& condition_reports,
                      const std::string& out_dir) {
    if (condition_reports.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "analyze requires at least two condition reports");

    std::vector<std::string> condition_names;
    std::vector<DiceReport> reports;
    for (const auto& [name, path] : condition_reports) {
        condition_names.push_back(name);
        reports.push_back(dice_report_from_csv(read_text_file(path)));
    }
    const auto& first_cases = reports.front().per_case;
    for (std::size_t c = 1; c < reports.size(); ++c) {
        if (reports[c].per_case.size() != first_cases.size())
            throw Error(ErrorCode::CaseSetMismatch,
                        "condition '" + condition_names[c] + "' has a different case count");
        for (const auto& [id, unused] : first_cases)
            if (!reports[c].per_case.count(id))
                throw Error(ErrorCode::CaseSetMismatch, "condition '" + condition_names[c] +
                                                            "' lacks case '" + id + "'");
    }

    nlohmann::json stats_out;
    std::ostringstream box_csv;
    box_csv << "region,condition,min,q1,median,q3,whisker_low,whisker_high,variance,outliers\n";

    for (int r = 0; r < 3; ++r) {
        const char* region = region_name(kRegions[r]);
        ScoreMatrix matrix;
        matrix.conditions = condition_names;
        for (const auto& [id, unused] : first_cases) matrix.subjects.push_back(id);
        matrix.values.resize(matrix.subjects.size() * matrix.conditions.size());
        for (std::size_t i = 0; i < matrix.subjects.size(); ++i)
            for (std::size_t j = 0; j < matrix.conditions.size(); ++j)
                matrix.values[i * matrix.conditions.size() + j] =
                    reports[j].per_case.at(matrix.subjects[i]).dice[r];

        nlohmann::json region_out;
        region_out["anova"] = anova_json(rm_anova(matrix));

        region_out["paired"] = nlohmann::json::array();
        for (std::size_t a = 0; a < condition_names.size(); ++a)
            for (std::size_t b = a + 1; b < condition_names.size(); ++b) {
                nlohmann::json pair_out;
                pair_out["a"] = condition_names[a];
                pair_out["b"] = condition_names[b];
                try {
                    PairedResult pr = paired_comparison(matrix, condition_names[a], condition_names[b]);
                    pair_out["t"] = pr.t_statistic;
                    pair_out["p_value"] = pr.p_value;
                    pair_out["mean_diff"] = pr.mean_diff;
                    pair_out["df"] = pr.df;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::ZeroVarianceDifferences) throw;
                    pair_out["error"] = "zero-variance differences";
                }
                region_out["paired"].push_back(pair_out);
            }

        for (const BoxPlotSummary& s : boxplot_summary(matrix)) {
            nlohmann::json box;
            box["condition"] = s.condition;
            box["min"] = s.min;
            box["q1"] = s.q1;
            box["median"] = s.median;
            box["q3"] = s.q3;
            box["whisker_low"] = s.whisker_low;
            box["whisker_high"] = s.whisker_high;
            box["variance"] = s.variance;
            box["outliers"] = s.outliers;
            region_out["boxplots"].push_back(box);

            box_csv << region << "," << s.condition << "," << format_full(s.min) << ","
                    << format_full(s.q1) << "," << format_full(s.median) << "," << format_full(s.q3)
                    << "," << format_full(s.whisker_low) << "," << format_full(s.whisker_high) << ","
                    << format_full(s.variance) << ",";
            for (std::size_t i = 0; i < s.outliers.size(); ++i)
                box_csv << (i ? ";" : "") << format_full(s.outliers[i]);
            box_csv << "\n";
        }
        stats_out[region] = region_out;
    }

    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / "stats.json").string(), stats_out.dump(2) + "\n");
    write_text_file((fs::path(out_dir) / "boxplots.csv").string(), box_csv.str());

    CmdResult result;
    result.cases_processed = static_cast<int>(first_cases.size());
    return result;
}

namespace {

struct CheckSink {
    std::ostringstream out;
    int run = 0;
    int failed = 0;

    void check(const std::string& name, double expected, double got, double tolerance) {
        ++run;
        const double err = std::abs(got - expected);
        const bool pass = err <= tolerance;
        if (!pass) ++failed;
        out << (pass ? "[PASS] " : "[FAIL] ") << name << ": expected " << format_full(expected)
            << ", got " << format_full(got) << ", |err| " << format_full(err) << " (tol "
            << format_full(tolerance) << ")\n";
    }

    void check_bool(const std::string& name, bool pass, const std::string& detail) {
        ++run;
        if (!pass) ++failed;
        out << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    }
};

}  // namespace

VerifyMathResult cmd_verify_math() {
    CheckSink sink;

    sink.check("poly_lr epoch 0 (lr0)", 0.01, poly_lr({0.01, 300, 0.9}, 0), 0.0);
    sink.check("poly_lr epoch 150/300", 0.0053588673126814658, poly_lr({0.01, 300, 0.9}, 150), 1e-9);
    sink.check("poly_lr epoch 300/300", 0.0, poly_lr({0.01, 300, 0.9}, 300), 0.0);

    sink.check("deep_supervision [1,1,1]", 1.75, deep_supervision_loss({1.0, 1.0, 1.0}), 0.0);
    sink.check("deep_supervision single level", 0.37, deep_supervision_loss({0.37}), 0.0);
    sink.check("deep_supervision zeros", 0.0, deep_supervision_loss({0.0, 0.0, 0.0}), 0.0);

    sink.check("bce y=[1] p=[0.5] (ln 2)", 0.69314718055994531,
               bce(Prediction{{0.5}}, Target({1.0})), 1e-9);
    sink.check("bce y=[1,0] p=[0.9,0.1]", 0.10536051565782630,
               bce(Prediction{{0.9, 0.1}}, Target({1.0, 0.0})), 1e-9);
    sink.check("ce one-hot vs 50/50 (ln 2)", 0.69314718055994531,
               ce({{0.5, 0.5}}, {{1.0, 0.0}}), 1e-9);
    sink.check("dice_loss half overlap", 0.5,
               dice_loss(Prediction{{1.0, 1.0, 0.0, 0.0}}, Target({1.0, 0.0, 1.0, 0.0}), 0.0), 0.0);
    sink.check("combined = dice + bce at y=[1] p=[0.5]",
               dice_loss(Prediction{{0.5}}, Target({1.0})) + 0.69314718055994531,
               combined_loss(Prediction{{0.5}}, Target({1.0})), 1e-9);

    {
        RngStream rng(20260809, 0, 0);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 1 + rng.uniform_int(16);
            std::vector<std::vector<double>> pred_rows, tgt_rows;
            Prediction flat_pred;
            std::vector<double> flat_tgt;
            for (std::size_t i = 0; i < n; ++i) {
                double p = rng.uniform(0.02, 0.98);
                double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
                pred_rows.push_back({p, 1.0 - p});
                tgt_rows.push_back({y, 1.0 - y});
                flat_pred.probs.push_back(p);
                flat_tgt.push_back(y);
            }
            worst = std::max(worst, std::abs(ce(pred_rows, tgt_rows) -
                                             bce(flat_pred, Target(flat_tgt))));
        }
        sink.check("two-class ce == bce (100 random, worst |diff|)", 0.0, worst, 1e-7);
    }

    sink.check("grad_bce at y=1, p=0.5 (N=1)", -2.0,
               grad_bce(Prediction{{0.5}}, Target({1.0}))[0], 1e-12);

    {
        RngStream rng(20260809, 1, 0);
        double worst_rel = 0.0;
        const double h = 1e-4;
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 2 + rng.uniform_int(14);
            Prediction pred;
            std::vector<double> tgt;
            for (std::size_t i = 0; i < n; ++i) {
                pred.probs.push_back(rng.uniform(0.05, 0.95));
                tgt.push_back(rng.bernoulli(0.5) ? 1.0 : 0.0);
            }
            Target target(tgt);
            auto g_bce = grad_bce(pred, target);
            auto g_dice = grad_dice(pred, target);
            for (std::size_t i = 0; i < n; ++i) {
                Prediction up = pred, down = pred;
                up.probs[i] += h;
                down.probs[i] -= h;
                double fd_bce = (bce(up, target) - bce(down, target)) / (2 * h);
                double fd_dice = (dice_loss(up, target) - dice_loss(down, target)) / (2 * h);
                double rel_bce = std::abs(g_bce[i] - fd_bce) / std::max(std::abs(fd_bce), 1e-12);
                double rel_dice = std::abs(g_dice[i] - fd_dice) / std::max(std::abs(fd_dice), 1e-12);
                worst_rel = std::max({worst_rel, rel_bce, rel_dice});
            }
        }
        sink.check("gradients vs central differences (worst rel err)", 0.0, worst_rel, 1e-5);
    }

    {
        auto grad_hi = grad_bce(Prediction{{1.0}}, Target({1.0}));
        auto grad_lo = grad_bce(Prediction{{0.0}}, Target({0.0}));
        bool bounded = std::isfinite(grad_hi[0]) && std::isfinite(grad_lo[0]) &&
                       std::abs(grad_hi[0]) <= 1.0 / kLossEps && std::abs(grad_lo[0]) <= 1.0 / kLossEps;
        sink.check_bool("clamped gradients finite and within 1/eps", bounded,
                        "grad(1|1)=" + format_full(grad_hi[0]) + ", grad(0|0)=" + format_full(grad_lo[0]));
    }

    VerifyMathResult result;
    result.report = sink.out.str();
    result.checks_run = sink.run;
    result.checks_failed = sink.failed;
    return result;
}

}  // namespace voxaug
