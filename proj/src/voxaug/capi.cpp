// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include "voxaug.h"

#include <cstring>
#include <string>

#include "voxaug/batch.hpp"
#include "voxaug/nifti.hpp"
#include "voxaug/pipeline.hpp"
#include "voxaug/types.hpp"

namespace {

thread_local std::string g_last_error;

vx_status status_from_code(voxaug::ErrorCode code) {
    using voxaug::ErrorCode;
    switch (code) {
        case ErrorCode::NotFound: return VX_E_NOT_FOUND;
        case ErrorCode::MalformedHeader: return VX_E_MALFORMED;
        case ErrorCode::UnsupportedDatatype: return VX_E_UNSUPPORTED_DTYPE;
        case ErrorCode::NonFiniteData: return VX_E_NON_FINITE;
        case ErrorCode::IllegalLabel: return VX_E_ILLEGAL_LABEL;
        case ErrorCode::IoFailure: return VX_E_IO;
        case ErrorCode::InvalidArgument:
        case ErrorCode::LengthMismatch:
        case ErrorCode::EmptyInput:
        case ErrorCode::NotNormalized:
        case ErrorCode::EpochOutOfRange:
        case ErrorCode::IncompleteMatrix:
        case ErrorCode::InvalidDf:
        case ErrorCode::EmptyStratum: return VX_E_INVALID_ARGUMENT;
        case ErrorCode::ShapeMismatch:
        case ErrorCode::PermutationShapeMismatch: return VX_E_SHAPE_MISMATCH;
        case ErrorCode::DegenerateChannel:
        case ErrorCode::ZeroVarianceDifferences: return VX_E_DEGENERATE;
        case ErrorCode::RoiTooLarge: return VX_E_ROI_TOO_LARGE;
        case ErrorCode::GridTooCoarse: return VX_E_GRID_TOO_COARSE;
        case ErrorCode::EmptyPool: return VX_E_EMPTY_POOL;
        case ErrorCode::CaseSetMismatch: return VX_E_CASE_SET_MISMATCH;
        case ErrorCode::MissingChannel: return VX_E_MISSING_CHANNEL;
        case ErrorCode::MissingMask: return VX_E_MISSING_MASK;
        case ErrorCode::ConfigParse: return VX_E_CONFIG;
        case ErrorCode::Internal: return VX_E_RUNTIME;
    }
    return VX_E_RUNTIME;
}

template <typename Fn>
vx_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return VX_OK;
    } catch (const voxaug::Error& e) {
        g_last_error = e.what();
        return status_from_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return VX_E_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return VX_E_RUNTIME;
    }
}

vx_status require(bool ok, const char* message) {
    if (ok) return VX_OK;
    g_last_error = message;
    return VX_E_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

struct vx_volume {
    voxaug::Volume impl;
};

struct vx_mask {
    voxaug::SegMask impl;
};

struct vx_pipeline {
    voxaug::PipelineSpec spec;
    voxaug::MemoryReferenceProvider references;
};

extern "C" {

const char* vx_version(void) { return "0.1.0"; }

const char* vx_last_error(void) { return g_last_error.c_str(); }

/* ---- volumes ---- */

vx_status vx_volume_load(const char* path, vx_volume** out) {
    if (vx_status s = require(path && out, "path and out must be non-null")) return s;
    return guarded([&] { *out = new vx_volume{voxaug::nifti::load_volume(path)}; });
}

vx_status vx_volume_save(const vx_volume* v, const char* path) {
    if (vx_status s = require(v && path, "volume and path must be non-null")) return s;
    return guarded([&] { voxaug::nifti::save_volume(v->impl, path); });
}

vx_status vx_volume_create(const uint64_t shape[4], const float* data, vx_volume** out) {
    if (vx_status s = require(shape && data && out, "shape, data and out must be non-null")) return s;
    return guarded([&] {
        std::array<std::int64_t, 4> s{};
        std::size_t count = 1;
        for (int i = 0; i < 4; ++i) {
            s[i] = static_cast<std::int64_t>(shape[i]);
            count *= shape[i];
        }
        *out = new vx_volume{voxaug::Volume(s, std::vector<float>(data, data + count))};
    });
}

void vx_volume_free(vx_volume* v) { delete v; }

vx_status vx_volume_shape(const vx_volume* v, uint64_t out_shape[4]) {
    if (vx_status s = require(v && out_shape, "volume and out_shape must be non-null")) return s;
    for (int i = 0; i < 4; ++i) out_shape[i] = static_cast<uint64_t>(v->impl.shape[i]);
    return VX_OK;
}

const float* vx_volume_data(const vx_volume* v) { return v ? v->impl.data.data() : nullptr; }

vx_status vx_volume_spacing(const vx_volume* v, float out_spacing[3]) {
    if (vx_status s = require(v && out_spacing, "volume and out_spacing must be non-null")) return s;
    for (int i = 0; i < 3; ++i) out_spacing[i] = v->impl.spacing[i];
    return VX_OK;
}

vx_status vx_volume_affine(const vx_volume* v, float out_affine[16]) {
    if (vx_status s = require(v && out_affine, "volume and out_affine must be non-null")) return s;
    for (int i = 0; i < 16; ++i) out_affine[i] = v->impl.affine[i];
    return VX_OK;
}

/* ---- masks ---- */

vx_status vx_mask_load(const char* path, vx_mask** out) {
    if (vx_status s = require(path && out, "path and out must be non-null")) return s;
    return guarded([&] { *out = new vx_mask{voxaug::nifti::load_mask(path)}; });
}

vx_status vx_mask_save(const vx_mask* m, const char* path) {
    if (vx_status s = require(m && path, "mask and path must be non-null")) return s;
    return guarded([&] { voxaug::nifti::save_mask(m->impl, path); });
}

vx_status vx_mask_create(const uint64_t shape[3], const uint8_t* labels, vx_mask** out) {
    if (vx_status s = require(shape && labels && out, "shape, labels and out must be non-null")) return s;
    return guarded([&] {
        std::array<std::int64_t, 3> s{};
        std::size_t count = 1;
        for (int i = 0; i < 3; ++i) {
            s[i] = static_cast<std::int64_t>(shape[i]);
            count *= shape[i];
        }
        *out = new vx_mask{voxaug::SegMask(s, std::vector<std::uint8_t>(labels, labels + count))};
    });
}

void vx_mask_free(vx_mask* m) { delete m; }

vx_status vx_mask_shape(const vx_mask* m, uint64_t out_shape[3]) {
    if (vx_status s = require(m && out_shape, "mask and out_shape must be non-null")) return s;
    for (int i = 0; i < 3; ++i) out_shape[i] = static_cast<uint64_t>(m->impl.shape[i]);
    return VX_OK;
}

const uint8_t* vx_mask_data(const vx_mask* m) { return m ? m->impl.labels.data() : nullptr; }

/* ---- pipelines ---- */

vx_status vx_pipeline_load(const char* config_path, vx_pipeline** out) {
    if (vx_status s = require(config_path && out, "config_path and out must be non-null")) return s;
    return guarded([&] {
        auto* p = new vx_pipeline;
        try {
            p->spec = voxaug::load_pipeline_config(config_path);
        } catch (...) {
            delete p;
            throw;
        }
        *out = p;
    });
}

vx_status vx_pipeline_parse(const char* config_text, vx_pipeline** out) {
    if (vx_status s = require(config_text && out, "config_text and out must be non-null")) return s;
    return guarded([&] {
        auto* p = new vx_pipeline;
        try {
            p->spec = voxaug::parse_pipeline_config(config_text);
        } catch (...) {
            delete p;
            throw;
        }
        *out = p;
    });
}

void vx_pipeline_free(vx_pipeline* p) { delete p; }

vx_status vx_pipeline_add_reference(vx_pipeline* p, const char* case_id, const vx_volume* v) {
    if (vx_status s = require(p && case_id && v, "pipeline, case_id and volume must be non-null"))
        return s;
    return guarded([&] { p->references.add(case_id, v->impl); });
}

vx_status vx_pipeline_run(const vx_pipeline* p, const char* case_id, const vx_volume* in_volume,
                          const vx_mask* in_mask, uint64_t case_index, vx_volume** out_volume,
                          vx_mask** out_mask) {
    if (vx_status s = require(p && case_id && in_volume && out_volume,
                              "pipeline, case_id, in_volume and out_volume must be non-null"))
        return s;
    return guarded([&] {
        voxaug::Case input{case_id, in_volume->impl, std::nullopt, voxaug::Grade::Unknown};
        if (in_mask) input.mask = in_mask->impl;
        voxaug::Case output = run_pipeline(input, p->spec, case_index, &p->references);
        *out_volume = new vx_volume{std::move(output.volume)};
        if (out_mask) *out_mask = output.mask ? new vx_mask{std::move(*output.mask)} : nullptr;
    });
}

/* ---- batch commands ---- */

vx_status vx_cmd_index(const char* root, const char* layout, int require_masks,
                       const char* out_manifest) {
    if (vx_status s = require(root && layout && out_manifest, "root, layout and out must be non-null"))
        return s;
    return guarded([&] { voxaug::cmd_index(root, layout, require_masks != 0, out_manifest); });
}

vx_status vx_cmd_split(const char* index_manifest, double train_ratio, double val_ratio,
                       double test_ratio, uint64_t seed, const char* out_manifest) {
    if (vx_status s = require(index_manifest && out_manifest, "manifest paths must be non-null"))
        return s;
    return guarded([&] {
        voxaug::cmd_split(index_manifest, {train_ratio, val_ratio, test_ratio}, seed, out_manifest);
    });
}

vx_status vx_cmd_augment(const char* config_path, const char* index_manifest, const char* out_dir,
                         int workers, const uint64_t* seed_override, int* n_failed) {
    if (vx_status s =
            require(config_path && index_manifest && out_dir, "paths must be non-null"))
        return s;
    voxaug::AugmentOptions options;
    options.workers = workers;
    if (seed_override) options.seed_override = *seed_override;
    int failed = 0;
    vx_status status = guarded([&] {
        voxaug::CmdResult r = voxaug::cmd_augment(config_path, index_manifest, out_dir, options);
        failed = static_cast<int>(r.failures.size());
        if (!r.ok()) {
            std::string joined;
            for (const std::string& f : r.failures) joined += (joined.empty() ? "" : "; ") + f;
            throw voxaug::Error(voxaug::ErrorCode::Internal, joined);
        }
    });
    if (n_failed) *n_failed = failed;
    return status;
}

vx_status vx_cmd_evaluate(const char* pred_dir, const char* gt_dir, const char* out_dir,
                          const char* format) {
    if (vx_status s = require(pred_dir && gt_dir && out_dir, "directories must be non-null")) return s;
    return guarded(
        [&] { voxaug::cmd_evaluate(pred_dir, gt_dir, out_dir, format ? format : "csv,json"); });
}

vx_status vx_cmd_analyze(const char* const* condition_names, const char* const* report_csv_paths,
                         size_t n_conditions, const char* out_dir) {
    if (vx_status s = require(condition_names && report_csv_paths && out_dir,
                              "names, paths and out_dir must be non-null"))
        return s;
    return guarded([&] {
        std::vector<std::pair<std::string, std::string>> reports;
        for (size_t i = 0; i < n_conditions; ++i)
            reports.emplace_back(condition_names[i], report_csv_paths[i]);
        voxaug::cmd_analyze(reports, out_dir);
    });
}

vx_status vx_cmd_verify_math(char** report_out, int* n_failed) {
    int failed = 0;
    vx_status status = guarded([&] {
        voxaug::VerifyMathResult r = voxaug::cmd_verify_math();
        failed = r.checks_failed;
        if (report_out) *report_out = copy_string(r.report);
        if (r.checks_failed > 0)
            throw voxaug::Error(voxaug::ErrorCode::Internal,
                                std::to_string(r.checks_failed) + " math check(s) failed");
    });
    if (n_failed) *n_failed = failed;
    return status;
}

void vx_string_free(char* s) { delete[] s; }

}  // extern "C"
