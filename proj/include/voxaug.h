/* Copyright 2026 the voxaug authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the voxaug shared library: deterministic volumetric augmentation
 * and evaluation for multi-channel NIfTI data.
 *
 * Conventions:
 *   - Every function that can fail returns a vx_status; VX_OK is 0.
 *   - vx_last_error() returns a thread-local message for the most recent
 *     failure on the calling thread.
 *   - Objects returned through vx_*_load/create are owned by the caller and
 *     released with the matching vx_*_free. Handles are opaque.
 *   - Volumes are indexed (channel, z, y, x) with x fastest; masks (z, y, x).
 *   - A vx_pipeline may be configured (vx_pipeline_add_reference) from one
 *     thread; runs are const and may proceed concurrently afterwards.
 */

#ifndef VOXAUG_H
#define VOXAUG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VX_API __declspec(dllexport)
#else
#define VX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vx_status {
    VX_OK = 0,
    VX_E_NOT_FOUND = 1,
    VX_E_MALFORMED = 2,          /* bad NIfTI header / manifest / CSV */
    VX_E_UNSUPPORTED_DTYPE = 3,
    VX_E_NON_FINITE = 4,
    VX_E_ILLEGAL_LABEL = 5,
    VX_E_IO = 6,
    VX_E_INVALID_ARGUMENT = 7,
    VX_E_SHAPE_MISMATCH = 8,
    VX_E_DEGENERATE = 9,         /* degenerate channel / zero-variance input */
    VX_E_ROI_TOO_LARGE = 10,
    VX_E_GRID_TOO_COARSE = 11,
    VX_E_EMPTY_POOL = 12,
    VX_E_CASE_SET_MISMATCH = 13,
    VX_E_MISSING_CHANNEL = 14,
    VX_E_MISSING_MASK = 15,
    VX_E_CONFIG = 16,            /* pipeline config parse error */
    VX_E_RUNTIME = 17,           /* anything else */
} vx_status;

typedef struct vx_volume vx_volume;
typedef struct vx_mask vx_mask;
typedef struct vx_pipeline vx_pipeline;

VX_API const char* vx_version(void);

/* Message for the last failing call on this thread; empty string if none. */
VX_API const char* vx_last_error(void);

/* ---- volumes ---- */

VX_API vx_status vx_volume_load(const char* path, vx_volume** out);
VX_API vx_status vx_volume_save(const vx_volume* v, const char* path);
VX_API vx_status vx_volume_create(const uint64_t shape[4], const float* data, vx_volume** out);
VX_API void vx_volume_free(vx_volume* v);
VX_API vx_status vx_volume_shape(const vx_volume* v, uint64_t out_shape[4]);
VX_API const float* vx_volume_data(const vx_volume* v);
VX_API vx_status vx_volume_spacing(const vx_volume* v, float out_spacing[3]);
VX_API vx_status vx_volume_affine(const vx_volume* v, float out_affine[16]);

/* ---- label masks ---- */

VX_API vx_status vx_mask_load(const char* path, vx_mask** out);
VX_API vx_status vx_mask_save(const vx_mask* m, const char* path);
VX_API vx_status vx_mask_create(const uint64_t shape[3], const uint8_t* labels, vx_mask** out);
VX_API void vx_mask_free(vx_mask* m);
VX_API vx_status vx_mask_shape(const vx_mask* m, uint64_t out_shape[3]);
VX_API const uint8_t* vx_mask_data(const vx_mask* m);

/* ---- pipelines ---- */

VX_API vx_status vx_pipeline_load(const char* config_path, vx_pipeline** out);
VX_API vx_status vx_pipeline_parse(const char* config_text, vx_pipeline** out);
VX_API void vx_pipeline_free(vx_pipeline* p);

/* Registers an in-memory MSR reference volume under a case id. */
VX_API vx_status vx_pipeline_add_reference(vx_pipeline* p, const char* case_id,
                                           const vx_volume* v);

/* Runs the full transform chain on one case. in_mask and out_mask may be
 * NULL; *out_mask is set only when a mask was supplied. Output for a fixed
 * (volume, config, case_index) is bit-identical across calls. */
VX_API vx_status vx_pipeline_run(const vx_pipeline* p, const char* case_id,
                                 const vx_volume* in_volume, const vx_mask* in_mask,
                                 uint64_t case_index, vx_volume** out_volume, vx_mask** out_mask);

/* ---- batch commands (the CLI surface) ---- */

VX_API vx_status vx_cmd_index(const char* root, const char* layout, int require_masks,
                              const char* out_manifest);

VX_API vx_status vx_cmd_split(const char* index_manifest, double train_ratio, double val_ratio,
                              double test_ratio, uint64_t seed, const char* out_manifest);

/* workers <= 0 selects hardware concurrency. seed_override may be NULL.
 * n_failed (optional) receives the per-case failure count; the call returns
 * VX_E_RUNTIME when any case failed. */
VX_API vx_status vx_cmd_augment(const char* config_path, const char* index_manifest,
                                const char* out_dir, int workers, const uint64_t* seed_override,
                                int* n_failed);

/* format: "csv", "json" or "csv,json". */
VX_API vx_status vx_cmd_evaluate(const char* pred_dir, const char* gt_dir, const char* out_dir,
                                 const char* format);

VX_API vx_status vx_cmd_analyze(const char* const* condition_names,
                                const char* const* report_csv_paths, size_t n_conditions,
                                const char* out_dir);

/* Runs the closed-form math checks. *report_out (caller frees with
 * vx_string_free) lists one expected/got/tolerance line per check. Returns
 * VX_OK only when every check passes. */
VX_API vx_status vx_cmd_verify_math(char** report_out, int* n_failed);

VX_API void vx_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* VOXAUG_H */
