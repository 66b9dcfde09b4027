// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include "voxaug/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace voxaug {

const char* transform_kind_name(TransformKind kind) {
    switch (kind) {
        case TransformKind::NormalizeNonZero: return "normalize_nonzero";
        case TransformKind::RandScaleIntensity: return "rand_scale_intensity";
        case TransformKind::RandShiftIntensity: return "rand_shift_intensity";
        case TransformKind::RandSpatialCrop: return "rand_spatial_crop";
        case TransformKind::RandFlipZ: return "rand_flip_z";
        case TransformKind::RandElasticAffine: return "rand_elastic_affine";
        case TransformKind::GaussianNoise: return "gaussian_noise";
        case TransformKind::Msr: return "msr";
        case TransformKind::Spn: return "spn";
    }
    return "unknown";
}

TransformKind transform_kind_from_name(const std::string& name) {
    static const std::map<std::string, TransformKind> table = {
        {"normalize_nonzero", TransformKind::NormalizeNonZero},
        {"rand_scale_intensity", TransformKind::RandScaleIntensity},
        {"rand_shift_intensity", TransformKind::RandShiftIntensity},
        {"rand_spatial_crop", TransformKind::RandSpatialCrop},
        {"rand_flip_z", TransformKind::RandFlipZ},
        {"rand_elastic_affine", TransformKind::RandElasticAffine},
        {"gaussian_noise", TransformKind::GaussianNoise},
        {"msr", TransformKind::Msr},
        {"spn", TransformKind::Spn},
    };
    auto it = table.find(name);
    if (it == table.end())
        throw Error(ErrorCode::ConfigParse, "unknown transform kind '" + name + "'");
    return it->second;
}

void TransformSpec::validate() const {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::InvalidArgument,
                    std::string(transform_kind_name(kind)) + ": p must lie in [0, 1]");
    switch (kind) {
        case TransformKind::RandScaleIntensity:
            if (!(factor_range > 0.0))
                throw Error(ErrorCode::InvalidArgument, "rand_scale_intensity: factor_range must be > 0");
            break;
        case TransformKind::RandShiftIntensity:
            if (offset_range < 0.0)
                throw Error(ErrorCode::InvalidArgument, "rand_shift_intensity: offset_range must be >= 0");
            break;
        case TransformKind::RandSpatialCrop:
            for (auto extent : roi)
                if (extent < 1)
                    throw Error(ErrorCode::InvalidArgument, "rand_spatial_crop: roi extents must be >= 1");
            break;
        case TransformKind::RandElasticAffine: {
            auto check_range = [](std::pair<double, double> r, const char* what) {
                if (r.first > r.second || r.first < 0.0)
                    throw Error(ErrorCode::InvalidArgument,
                                std::string("rand_elastic_affine: bad ") + what + " range");
            };
            check_range(elastic.offset_range, "offset");
            check_range(elastic.kernel_sigma_range, "kernel_sigma");
            check_range(elastic.shear_range, "shear");
            for (auto spacing : elastic.grid_spacing)
                if (spacing < 1)
                    throw Error(ErrorCode::InvalidArgument,
                                "rand_elastic_affine: grid_spacing entries must be >= 1");
            break;
        }
        case TransformKind::GaussianNoise:
            if (sigma < 0.0)
                throw Error(ErrorCode::InvalidArgument, "gaussian_noise: sigma must be >= 0");
            break;
        case TransformKind::Msr:
        case TransformKind::Spn:
            if (!(alpha >= 0.0 && alpha <= 1.0))
                throw Error(ErrorCode::InvalidArgument,
                            std::string(transform_kind_name(kind)) + ": alpha must lie in [0, 1]");
            break;
        case TransformKind::NormalizeNonZero:
        case TransformKind::RandFlipZ: break;
    }
}

bool PipelineSpec::has_kind(TransformKind kind) const {
    return std::any_of(transforms.begin(), transforms.end(),
                       [kind](const TransformSpec& t) { return t.kind == kind; });
}

void PipelineSpec::validate() const {
    for (const TransformSpec& t : transforms) t.validate();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
    std::size_t pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::string token;
    for (char ch : value + ",") {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!token.empty()) {
                parts.push_back(token);
                token.clear();
            }
        } else {
            token += ch;
        }
    }
    return parts;
}

double parse_double(const std::string& value, int line_no) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigParse,
                    "line " + std::to_string(line_no) + ": expected a number, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& value, int line_no) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigParse, "line " + std::to_string(line_no) +
                                                ": expected an unsigned integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& value, int line_no) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw Error(ErrorCode::ConfigParse,
                "line " + std::to_string(line_no) + ": expected true/false, got '" + value + "'");
}

std::array<std::int64_t, 3> parse_int3(const std::string& value, int line_no) {
    auto parts = split_list(value);
    if (parts.size() != 3)
        throw Error(ErrorCode::ConfigParse,
                    "line " + std::to_string(line_no) + ": expected three integers (z y x)");
    std::array<std::int64_t, 3> out{};
    for (int i = 0; i < 3; ++i) out[i] = static_cast<std::int64_t>(parse_u64(parts[i], line_no));
    return out;
}

std::pair<double, double> parse_range(const std::string& value, int line_no) {
    auto parts = split_list(value);
    if (parts.size() != 2)
        throw Error(ErrorCode::ConfigParse,
                    "line " + std::to_string(line_no) + ": expected two numbers (lo hi)");
    return {parse_double(parts[0], line_no), parse_double(parts[1], line_no)};
}

struct Block {
    std::map<std::string, std::pair<std::string, int>> keys;  // key -> (value, line)
    int order = 0;
    int declared_at = 0;
};

}  // namespace

PipelineSpec parse_pipeline_config(const std::string& text) {
    PipelineSpec spec;
    std::vector<Block> blocks;
    Block* current = nullptr;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    int block_counter = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line == "[transform]") {
            blocks.emplace_back();
            blocks.back().order = block_counter++;
            blocks.back().declared_at = line_no;
            current = &blocks.back();
            continue;
        }
        if (line.front() == '[')
            throw Error(ErrorCode::ConfigParse,
                        "line " + std::to_string(line_no) + ": only [transform] blocks are allowed");
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ConfigParse,
                        "line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorCode::ConfigParse,
                        "line " + std::to_string(line_no) + ": empty key or value");

        if (current == nullptr) {
            if (key == "master_seed") {
                spec.master_seed = parse_u64(value, line_no);
            } else if (key == "spn_permutation_seed") {
                spec.spn_permutation_seed = parse_u64(value, line_no);
            } else if (key == "reference_pool") {
                if (value != "*") spec.reference_pool = split_list(value);
            } else {
                throw Error(ErrorCode::ConfigParse,
                            "line " + std::to_string(line_no) + ": unknown top-level key '" + key + "'");
            }
        } else {
            if (current->keys.count(key))
                throw Error(ErrorCode::ConfigParse,
                            "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
            current->keys[key] = {value, line_no};
        }
    }

    // Blocks keep file order unless an explicit `order` key overrides it.
    std::vector<std::pair<int, TransformSpec>> ordered;
    for (Block& block : blocks) {
        auto take = [&block](const std::string& key) -> std::optional<std::pair<std::string, int>> {
            auto it = block.keys.find(key);
            if (it == block.keys.end()) return std::nullopt;
            auto result = it->second;
            block.keys.erase(it);
            return result;
        };

        auto kind_kv = take("kind");
        if (!kind_kv)
            throw Error(ErrorCode::ConfigParse, "transform block at line " +
                                                    std::to_string(block.declared_at) + " lacks 'kind'");
        TransformSpec t;
        t.kind = transform_kind_from_name(kind_kv->first);

        int order = block.order;
        if (auto kv = take("order")) order = static_cast<int>(parse_u64(kv->first, kv->second));
        if (auto kv = take("p")) t.p = parse_double(kv->first, kv->second);

        switch (t.kind) {
            case TransformKind::NormalizeNonZero:
            case TransformKind::RandFlipZ: break;
            case TransformKind::RandScaleIntensity:
                if (auto kv = take("factor_range")) t.factor_range = parse_double(kv->first, kv->second);
                if (auto kv = take("per_channel")) t.per_channel = parse_bool(kv->first, kv->second);
                break;
            case TransformKind::RandShiftIntensity:
                if (auto kv = take("offset_range")) t.offset_range = parse_double(kv->first, kv->second);
                if (auto kv = take("per_channel")) t.per_channel = parse_bool(kv->first, kv->second);
                break;
            case TransformKind::RandSpatialCrop:
                if (auto kv = take("roi")) t.roi = parse_int3(kv->first, kv->second);
                break;
            case TransformKind::RandElasticAffine:
                if (auto kv = take("offset_range")) t.elastic.offset_range = parse_range(kv->first, kv->second);
                if (auto kv = take("kernel_sigma_range"))
                    t.elastic.kernel_sigma_range = parse_range(kv->first, kv->second);
                if (auto kv = take("shear_range")) t.elastic.shear_range = parse_range(kv->first, kv->second);
                if (auto kv = take("grid_spacing")) t.elastic.grid_spacing = parse_int3(kv->first, kv->second);
                break;
            case TransformKind::GaussianNoise: {
                auto kv = take("sigma");
                if (!kv)
                    throw Error(ErrorCode::ConfigParse,
                                "gaussian_noise block at line " + std::to_string(block.declared_at) +
                                    ": sigma must be stated explicitly");
                t.sigma = parse_double(kv->first, kv->second);
                break;
            }
            case TransformKind::Msr:
                if (auto kv = take("alpha")) t.alpha = parse_double(kv->first, kv->second);
                if (auto kv = take("allow_self")) t.allow_self = parse_bool(kv->first, kv->second);
                break;
            case TransformKind::Spn:
                if (auto kv = take("alpha")) t.alpha = parse_double(kv->first, kv->second);
                break;
        }
        if (!block.keys.empty())
            throw Error(ErrorCode::ConfigParse,
                        "line " + std::to_string(block.keys.begin()->second.second) + ": key '" +
                            block.keys.begin()->first + "' does not belong to " +
                            transform_kind_name(t.kind));
        t.validate();
        ordered.emplace_back(order, std::move(t));
    }

    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [order, t] : ordered) spec.transforms.push_back(std::move(t));
    spec.validate();
    return spec;
}

PipelineSpec load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::NotFound, "cannot open pipeline config: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_pipeline_config(buffer.str());
}

namespace {

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

std::string pipeline_config_to_string(const PipelineSpec& spec) {
    std::ostringstream out;
    out << "master_seed = " << spec.master_seed << "\n";
    out << "spn_permutation_seed = " << spec.spn_permutation_seed << "\n";
    if (!spec.reference_pool.empty()) {
        out << "reference_pool = ";
        for (std::size_t i = 0; i < spec.reference_pool.size(); ++i)
            out << (i ? ", " : "") << spec.reference_pool[i];
        out << "\n";
    }
    for (const TransformSpec& t : spec.transforms) {
        out << "\n[transform]\n";
        out << "kind = " << transform_kind_name(t.kind) << "\n";
        out << "p = " << format_double(t.p) << "\n";
        switch (t.kind) {
            case TransformKind::NormalizeNonZero:
            case TransformKind::RandFlipZ: break;
            case TransformKind::RandScaleIntensity:
                out << "factor_range = " << format_double(t.factor_range) << "\n";
                if (t.per_channel) out << "per_channel = true\n";
                break;
            case TransformKind::RandShiftIntensity:
                out << "offset_range = " << format_double(t.offset_range) << "\n";
                if (t.per_channel) out << "per_channel = true\n";
                break;
            case TransformKind::RandSpatialCrop:
                out << "roi = " << t.roi[0] << " " << t.roi[1] << " " << t.roi[2] << "\n";
                break;
            case TransformKind::RandElasticAffine:
                out << "offset_range = " << format_double(t.elastic.offset_range.first) << " "
                    << format_double(t.elastic.offset_range.second) << "\n";
                out << "kernel_sigma_range = " << format_double(t.elastic.kernel_sigma_range.first)
                    << " " << format_double(t.elastic.kernel_sigma_range.second) << "\n";
                out << "shear_range = " << format_double(t.elastic.shear_range.first) << " "
                    << format_double(t.elastic.shear_range.second) << "\n";
                out << "grid_spacing = " << t.elastic.grid_spacing[0] << " "
                    << t.elastic.grid_spacing[1] << " " << t.elastic.grid_spacing[2] << "\n";
                break;
            case TransformKind::GaussianNoise:
                out << "sigma = " << format_double(t.sigma) << "\n";
                break;
            case TransformKind::Msr:
                out << "alpha = " << format_double(t.alpha) << "\n";
                if (t.allow_self) out << "allow_self = true\n";
                break;
            case TransformKind::Spn:
                out << "alpha = " << format_double(t.alpha) << "\n";
                break;
        }
    }
    return out.str();
}

void MemoryReferenceProvider::add(const std::string& id, Volume volume) {
    ids_.push_back(id);
    volumes_.push_back(std::move(volume));
}

Case MemoryReferenceProvider::load(const std::string& id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (ids_[i] == id) return Case{id, volumes_[i], std::nullopt, Grade::Unknown};
    throw Error(ErrorCode::NotFound, "reference case '" + id + "' not in pool");
}

std::uint64_t MemoryReferenceProvider::case_index(const std::string& id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (ids_[i] == id) return i;
    throw Error(ErrorCode::NotFound, "reference case '" + id + "' not in pool");
}

namespace {

Case run_prefix(const Case& input, const PipelineSpec& spec, std::uint64_t case_index,
                const ReferenceProvider* references, std::size_t end,
                std::vector<TransformTrace>* trace);

}  // namespace

Volume msr(const Volume& x, const std::string& own_id, const std::vector<std::string>& pool,
           const ReferenceProvider& provider, RngStream& rng, double alpha, double p,
           bool allow_self, const PipelineSpec* prefix_spec, std::size_t prefix_len,
           std::string* chosen_id) {
    if (alpha < 0.0 || alpha > 1.0)
        throw Error(ErrorCode::InvalidArgument, "msr: alpha must lie in [0, 1]");
    if (!rng.bernoulli(p)) return x;

    std::vector<std::string> candidates;
    candidates.reserve(pool.size());
    for (const std::string& id : pool)
        if (allow_self || id != own_id) candidates.push_back(id);
    if (candidates.empty())
        throw Error(ErrorCode::EmptyPool, "msr: no reference candidates for case '" + own_id + "'");

    const std::string& ref_id = candidates[rng.uniform_int(candidates.size())];
    if (chosen_id) *chosen_id = ref_id;

    Case reference = provider.load(ref_id);
    if (prefix_spec != nullptr && prefix_len > 0)
        reference = run_prefix(reference, *prefix_spec, provider.case_index(ref_id), &provider,
                               prefix_len, nullptr);
    if (reference.volume.shape != x.shape)
        throw Error(ErrorCode::ShapeMismatch, "msr: reference '" + ref_id +
                                                  "' shape differs from case '" + own_id +
                                                  "' after preceding stages");
    return mix_volumes(x, reference.volume, alpha);
}

namespace {

std::string format_corner(const std::array<std::int64_t, 3>& c) {
    return std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]);
}

Case run_prefix(const Case& input, const PipelineSpec& spec, std::uint64_t case_index,
                const ReferenceProvider* references, std::size_t end,
                std::vector<TransformTrace>* trace) {
    Case current = input;
    for (std::size_t t = 0; t < end; ++t) {
        const TransformSpec& step = spec.transforms[t];
        RngStream rng(spec.master_seed, case_index, static_cast<std::uint64_t>(t));
        TransformTrace record{step.kind, false, ""};
        try {
            switch (step.kind) {
                case TransformKind::NormalizeNonZero:
                    current.volume = normalize_nonzero(current.volume);
                    record.applied = true;
                    break;
                case TransformKind::RandScaleIntensity: {
                    if (rng.bernoulli(step.p)) {
                        record.applied = true;
                        if (step.per_channel) {
                            std::vector<double> factors(static_cast<std::size_t>(current.volume.channels()));
                            for (double& f : factors)
                                f = rng.uniform(-step.factor_range, step.factor_range);
                            current.volume = scale_intensity_per_channel(current.volume, factors);
                        } else {
                            double factor = rng.uniform(-step.factor_range, step.factor_range);
                            record.detail = "factor=" + std::to_string(factor);
                            current.volume = scale_intensity(current.volume, factor);
                        }
                    }
                    break;
                }
                case TransformKind::RandShiftIntensity: {
                    if (rng.bernoulli(step.p)) {
                        record.applied = true;
                        if (step.per_channel) {
                            std::vector<double> offsets(static_cast<std::size_t>(current.volume.channels()));
                            for (double& o : offsets)
                                o = rng.uniform(-step.offset_range, step.offset_range);
                            current.volume = shift_intensity_per_channel(current.volume, offsets);
                        } else {
                            double offset = rng.uniform(-step.offset_range, step.offset_range);
                            record.detail = "offset=" + std::to_string(offset);
                            current.volume = shift_intensity(current.volume, offset);
                        }
                    }
                    break;
                }
                case TransformKind::RandSpatialCrop: {
                    const auto spatial = current.volume.spatial_shape();
                    std::array<std::int64_t, 3> corner{};
                    for (int a = 0; a < 3; ++a) {
                        if (step.roi[a] > spatial[a])
                            throw Error(ErrorCode::RoiTooLarge,
                                        "roi exceeds spatial extent on axis " + std::to_string(a));
                        corner[a] = static_cast<std::int64_t>(
                            rng.uniform_int(static_cast<std::uint64_t>(spatial[a] - step.roi[a] + 1)));
                    }
                    record.applied = true;
                    record.detail = "corner=" + format_corner(corner);
                    auto [vol, mask] = crop_at(current.volume, current.mask, corner, step.roi);
                    current.volume = std::move(vol);
                    current.mask = std::move(mask);
                    break;
                }
                case TransformKind::RandFlipZ: {
                    if (rng.bernoulli(step.p)) {
                        record.applied = true;
                        auto [vol, mask] = flip_z(current.volume, current.mask);
                        current.volume = std::move(vol);
                        current.mask = std::move(mask);
                    }
                    break;
                }
                case TransformKind::RandElasticAffine: {
                    identity_warp(current.volume.spatial_shape(), step.elastic.grid_spacing);
                    if (rng.bernoulli(step.p)) {
                        record.applied = true;
                        WarpField field =
                            make_random_warp(current.volume.spatial_shape(), rng, step.elastic);
                        auto [vol, mask] = warp(current.volume, current.mask, field);
                        current.volume = std::move(vol);
                        current.mask = std::move(mask);
                    }
                    break;
                }
                case TransformKind::GaussianNoise: {
                    if (rng.bernoulli(step.p)) {
                        record.applied = true;
                        record.detail = "sigma=" + std::to_string(step.sigma);
                        current.volume = add_gaussian_noise(current.volume, rng, step.sigma);
                    }
                    break;
                }
                case TransformKind::Msr: {
                    if (references == nullptr)
                        throw Error(ErrorCode::EmptyPool, "msr requires a reference provider");
                    const std::vector<std::string>& pool =
                        spec.reference_pool.empty() ? references->ids() : spec.reference_pool;
                    if (pool.empty())
                        throw Error(ErrorCode::EmptyPool, "msr reference pool is empty");
                    std::string ref_id;
                    Volume mixed = msr(current.volume, current.id, pool, *references, rng, step.alpha,
                                       step.p, step.allow_self, &spec, t, &ref_id);
                    record.applied = !ref_id.empty();
                    if (record.applied) record.detail = "ref=" + ref_id;
                    current.volume = std::move(mixed);
                    break;
                }
                case TransformKind::Spn: {
                    Permutation perm = make_spn_permutation(current.volume.spatial_shape(),
                                                            spec.spn_permutation_seed);
                    if (rng.bernoulli(step.p)) {
                        record.applied = true;
                        if (step.alpha > 0.0)
                            current.volume =
                                mix_volumes(current.volume, shuffle_pixels(current.volume, perm), step.alpha);
                    }
                    break;
                }
            }
        } catch (const Error& e) {
            throw Error(e.code(), "transform " + std::to_string(t) + " (" +
                                      transform_kind_name(step.kind) + "): " + std::string(e.what()));
        }
        if (trace) trace->push_back(std::move(record));
    }
    return current;
}

}  // namespace

Case run_pipeline(const Case& input, const PipelineSpec& spec, std::uint64_t case_index,
                  const ReferenceProvider* references, std::vector<TransformTrace>* trace) {
    spec.validate();
    return run_prefix(input, spec, case_index, references, spec.transforms.size(), trace);
}

}  // namespace voxaug
