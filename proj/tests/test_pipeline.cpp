// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "testutil.hpp"
#include "voxaug/pipeline.hpp"

using namespace voxaug;

namespace {

const char* kSmallConfig = R"(
master_seed = 42
spn_permutation_seed = 7

[transform]
kind = normalize_nonzero

[transform]
kind = rand_scale_intensity
p = 0.3
factor_range = 0.1

[transform]
kind = rand_flip_z
p = 0.3

[transform]
kind = spn
p = 1
alpha = 1e-7
)";

Case make_case(const std::string& id, std::uint64_t seed) {
    Case c;
    c.id = id;
    c.volume = testutil::random_volume(seed, {2, 4, 6, 6}, 0.5, 3.0);
    c.mask = testutil::random_mask(seed + 500, {4, 6, 6});
    return c;
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("round trip through serialization") {
        PipelineSpec spec = parse_pipeline_config(kSmallConfig);
        CHECK(spec.master_seed == 42);
        CHECK(spec.spn_permutation_seed == 7);
        REQUIRE(spec.transforms.size() == 4);
        CHECK(spec.transforms[0].kind == TransformKind::NormalizeNonZero);
        CHECK(spec.transforms[3].kind == TransformKind::Spn);
        CHECK(spec.transforms[3].alpha == doctest::Approx(1e-7));

        PipelineSpec reparsed = parse_pipeline_config(pipeline_config_to_string(spec));
        CHECK(pipeline_config_to_string(reparsed) == pipeline_config_to_string(spec));
    }

    SUBCASE("explicit order keys override file order") {
        PipelineSpec spec = parse_pipeline_config(R"(
[transform]
kind = rand_flip_z
order = 2

[transform]
kind = normalize_nonzero
order = 1
)");
        CHECK(spec.transforms[0].kind == TransformKind::NormalizeNonZero);
        CHECK(spec.transforms[1].kind == TransformKind::RandFlipZ);
    }

    SUBCASE("errors carry line information") {
        CHECK_THROWS_AS(parse_pipeline_config("[transform]\nkind = bogus\n"), Error);
        CHECK_THROWS_AS(parse_pipeline_config("[section]\n"), Error);
        CHECK_THROWS_AS(parse_pipeline_config("[transform]\np = 0.5\n"), Error);  // no kind
        CHECK_THROWS_AS(parse_pipeline_config("[transform]\nkind = msr\nroi = 1 2 3\n"), Error);
        CHECK_THROWS_AS(parse_pipeline_config("[transform]\nkind = gaussian_noise\np = 1\n"),
                        Error);  // sigma must be explicit
        CHECK_THROWS_AS(parse_pipeline_config("[transform]\nkind = msr\nalpha = 1.5\n"), Error);
        CHECK_THROWS_AS(parse_pipeline_config("stray = 1\n"), Error);
    }

    SUBCASE("shipped presets parse with the documented defaults") {
        PipelineSpec msr_preset = load_pipeline_config(std::string(VOXAUG_PRESET_DIR) + "/baseline_msr.cfg");
        bool found_msr = false;
        for (const TransformSpec& t : msr_preset.transforms)
            if (t.kind == TransformKind::Msr) {
                found_msr = true;
                CHECK(t.p == 0.5);
                CHECK(t.alpha == 1e-4);
            }
        CHECK(found_msr);

        PipelineSpec spn_preset = load_pipeline_config(std::string(VOXAUG_PRESET_DIR) + "/baseline_spn.cfg");
        bool found_spn = false;
        for (const TransformSpec& t : spn_preset.transforms)
            if (t.kind == TransformKind::Spn) {
                found_spn = true;
                CHECK(t.p == 1.0);
                CHECK(t.alpha == 1e-7);
            }
        CHECK(found_spn);

        // The baseline chain keeps its published order.
        PipelineSpec base = load_pipeline_config(std::string(VOXAUG_PRESET_DIR) + "/baseline.cfg");
        REQUIRE(base.transforms.size() == 6);
        CHECK(base.transforms[0].kind == TransformKind::NormalizeNonZero);
        CHECK(base.transforms[1].kind == TransformKind::RandScaleIntensity);
        CHECK(base.transforms[2].kind == TransformKind::RandShiftIntensity);
        CHECK(base.transforms[3].kind == TransformKind::RandSpatialCrop);
        CHECK(base.transforms[4].kind == TransformKind::RandFlipZ);
        CHECK(base.transforms[5].kind == TransformKind::RandElasticAffine);
    }
}

TEST_CASE("run_pipeline") {
    SUBCASE("empty transform list is the identity") {
        PipelineSpec spec;
        Case c = make_case("id0", 3);
        Case out = run_pipeline(c, spec, 0);
        CHECK(out.volume.data == c.volume.data);
        CHECK(out.mask->labels == c.mask->labels);
    }

    SUBCASE("same (case, spec, index) twice is bit-identical") {
        PipelineSpec spec = parse_pipeline_config(kSmallConfig);
        Case c = make_case("id0", 4);
        Case a = run_pipeline(c, spec, 5);
        Case b = run_pipeline(c, spec, 5);
        CHECK(a.volume.data == b.volume.data);
        CHECK(a.mask->labels == b.mask->labels);

        Case other = run_pipeline(c, spec, 6);  // different case index differs
        CHECK(a.volume.data != other.volume.data);
    }

    SUBCASE("trace records applied transforms") {
        PipelineSpec spec = parse_pipeline_config(kSmallConfig);
        Case c = make_case("id0", 4);
        std::vector<TransformTrace> trace;
        run_pipeline(c, spec, 5, nullptr, &trace);
        REQUIRE(trace.size() == 4);
        CHECK(trace[0].applied);              // normalize always applies
        CHECK(trace[3].applied);              // spn has p=1
        CHECK(trace[3].kind == TransformKind::Spn);
    }

    SUBCASE("errors are annotated with the transform index") {
        PipelineSpec spec;
        TransformSpec crop;
        crop.kind = TransformKind::RandSpatialCrop;
        crop.roi = {100, 100, 100};
        spec.transforms.push_back(crop);
        Case c = make_case("id0", 8);
        try {
            run_pipeline(c, spec, 0);
            FAIL("expected RoiTooLarge");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::RoiTooLarge);
            CHECK(std::string(e.what()).find("transform 0") != std::string::npos);
        }
    }
}

TEST_CASE("msr inside the pipeline") {
    MemoryReferenceProvider pool;
    pool.add("ref0", testutil::random_volume(100, {2, 4, 6, 6}, 0.5, 3.0));
    pool.add("ref1", testutil::random_volume(101, {2, 4, 6, 6}, 0.5, 3.0));
    pool.add("self", testutil::random_volume(102, {2, 4, 6, 6}, 0.5, 3.0));

    SUBCASE("alpha endpoints against a two-candidate pool") {
        RngStream rng(1, 2, 3);
        Volume x = testutil::random_volume(50, {2, 4, 6, 6});
        std::string chosen;
        Volume id_out = msr(x, "self", pool.ids(), pool, rng, 0.0, 1.0, false, nullptr, 0, &chosen);
        CHECK(id_out.data == x.data);
        CHECK((chosen == "ref0" || chosen == "ref1"));  // self excluded

        RngStream rng2(1, 2, 3);
        Volume full = msr(x, "self", pool.ids(), pool, rng2, 1.0, 1.0, false, nullptr, 0, &chosen);
        CHECK(full.data == pool.load(chosen).volume.data);
    }

    SUBCASE("empty candidate set raises EmptyPool") {
        MemoryReferenceProvider only_self;
        only_self.add("self", testutil::random_volume(102, {2, 4, 6, 6}));
        RngStream rng(0, 0, 0);
        Volume x = testutil::random_volume(50, {2, 4, 6, 6});
        try {
            msr(x, "self", only_self.ids(), only_self, rng, 0.5, 1.0, false);
            FAIL("expected EmptyPool");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EmptyPool);
        }
        // allow_self turns the same call into a valid self-mix.
        RngStream rng2(0, 0, 0);
        Volume mixed = msr(x, "self", only_self.ids(), only_self, rng2, 0.5, 1.0, true);
        CHECK(mixed.shape == x.shape);
    }

    SUBCASE("shape mismatch against the pool is rejected") {
        MemoryReferenceProvider bad;
        bad.add("other", testutil::random_volume(1, {2, 4, 6, 5}));
        RngStream rng(0, 0, 0);
        Volume x = testutil::random_volume(50, {2, 4, 6, 6});
        try {
            msr(x, "self", bad.ids(), bad, rng, 0.5, 1.0, false);
            FAIL("expected ShapeMismatch");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ShapeMismatch);
        }
    }

    SUBCASE("msr after normalize equals the two-step manual composition") {
        // Pipeline: normalize -> msr(p=1, alpha=1e-4). The reference passes
        // through normalize with its own case index before mixing.
        PipelineSpec spec = parse_pipeline_config(R"(
master_seed = 11

[transform]
kind = normalize_nonzero

[transform]
kind = msr
p = 1
alpha = 1e-4
)");
        MemoryReferenceProvider two;
        Volume vol_a = testutil::random_volume(201, {1, 4, 4, 4}, 0.5, 3.0);
        Volume vol_b = testutil::random_volume(202, {1, 4, 4, 4}, 0.5, 3.0);
        two.add("a", vol_a);
        two.add("b", vol_b);

        Case input{"a", vol_a, std::nullopt, Grade::Unknown};
        Case out = run_pipeline(input, spec, two.case_index("a"), &two);

        // Manual composition: the only candidate is "b".
        Volume norm_a = normalize_nonzero(vol_a);
        Volume norm_b = normalize_nonzero(vol_b);
        Volume expected = mix_volumes(norm_a, norm_b, 1e-4);
        REQUIRE(out.volume.data.size() == expected.data.size());
        for (std::size_t i = 0; i < expected.data.size(); ++i)
            CHECK(out.volume.data[i] == expected.data[i]);
    }
}

TEST_CASE("probability gating frequency over seeded trials") {
    PipelineSpec spec = parse_pipeline_config(R"(
master_seed = 97

[transform]
kind = rand_flip_z
p = 0.3
)");
    Case c;
    c.id = "gate";
    c.volume = testutil::random_volume(1, {1, 2, 2, 2});
    int fired = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        std::vector<TransformTrace> trace;
        run_pipeline(c, spec, static_cast<std::uint64_t>(i), nullptr, &trace);
        fired += trace[0].applied ? 1 : 0;
    }
    const double expected = 0.3 * trials;
    const double margin = 4.0 * std::sqrt(0.3 * 0.7 * trials);
    CHECK(fired >= static_cast<int>(expected - margin));
    CHECK(fired <= static_cast<int>(expected + margin));
}
