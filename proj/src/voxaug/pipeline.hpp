// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXAUG_PIPELINE_HPP
#define VOXAUG_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "voxaug/transforms.hpp"
#include "voxaug/types.hpp"

namespace voxaug {

enum class TransformKind {
    NormalizeNonZero,
    RandScaleIntensity,
    RandShiftIntensity,
    RandSpatialCrop,
    RandFlipZ,
    RandElasticAffine,
    GaussianNoise,
    Msr,
    Spn,
};

const char* transform_kind_name(TransformKind kind);
TransformKind transform_kind_from_name(const std::string& name);

/// One probability-gated transform. Only the fields belonging to `kind` are
/// meaningful; validate() checks them.
struct TransformSpec {
    TransformKind kind = TransformKind::NormalizeNonZero;
    double p = 1.0;

    double factor_range = 0.1;   // rand_scale_intensity
    double offset_range = 0.1;   // rand_shift_intensity
    bool per_channel = false;    // scale / shift

    std::array<std::int64_t, 3> roi{128, 128, 128};  // rand_spatial_crop, (z, y, x)

    ElasticAffineParams elastic;  // rand_elastic_affine (elastic.p unused; p above gates)

    double sigma = 0.1;  // gaussian_noise; must be explicit in config files

    double alpha = 0.0;      // msr / spn
    bool allow_self = false;  // msr

    void validate() const;
};

/// Ordered, seeded transform list — the reproducibility contract. Serializes
/// to the block-structured text config consumed by the CLI.
struct PipelineSpec {
    std::vector<TransformSpec> transforms;
    std::uint64_t master_seed = 0;
    std::uint64_t spn_permutation_seed = 0;
    std::vector<std::string> reference_pool;  // case ids; empty = every case the provider knows

    bool has_kind(TransformKind kind) const;
    void validate() const;
};

PipelineSpec parse_pipeline_config(const std::string& text);
PipelineSpec load_pipeline_config(const std::string& path);
std::string pipeline_config_to_string(const PipelineSpec& spec);

/// Source of MSR reference volumes. load() returns the raw case; the pipeline
/// pushes it through the same preceding stages as the case being augmented,
/// using the reference's own case_index for RNG derivation.
class ReferenceProvider {
public:
    virtual ~ReferenceProvider() = default;
    virtual const std::vector<std::string>& ids() const = 0;
    virtual Case load(const std::string& id) const = 0;
    virtual std::uint64_t case_index(const std::string& id) const = 0;
};

/// In-memory provider, used by tests and the C API.
class MemoryReferenceProvider : public ReferenceProvider {
public:
    void add(const std::string& id, Volume volume);
    const std::vector<std::string>& ids() const override { return ids_; }
    Case load(const std::string& id) const override;
    std::uint64_t case_index(const std::string& id) const override;

private:
    std::vector<std::string> ids_;
    std::vector<Volume> volumes_;
};

Volume msr(const Volume& x, const std::string& own_id, const std::vector<std::string>& pool,
           const ReferenceProvider& provider, RngStream& rng, double alpha, double p,
           bool allow_self, const PipelineSpec* prefix_spec = nullptr,
           std::size_t prefix_len = 0, std::string* chosen_id = nullptr);

/// Per-transform provenance: which transforms fired and with which draws.
struct TransformTrace {
    TransformKind kind;
    bool applied = false;
    std::string detail;  // e.g. "factor=0.08", "corner=3,1,2", "ref=case07"
};

/// Applies spec.transforms in order; transform t uses RngStream(master_seed,
/// case_index, t). Pure function of (case, spec, case_index): reruns and any
/// degree of parallelism produce bit-identical output.
Case run_pipeline(const Case& input, const PipelineSpec& spec, std::uint64_t case_index,
                  const ReferenceProvider* references = nullptr,
                  std::vector<TransformTrace>* trace = nullptr);

}  // namespace voxaug

#endif
