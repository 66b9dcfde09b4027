// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#include "voxaug/nifti.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

namespace voxaug::nifti {

namespace {

// NIfTI-1 header, 348 bytes, naturally packed (every member sits on its own
// alignment boundary, so no compiler padding is introduced).
struct Nifti1Header {
    std::int32_t sizeof_hdr;    // must be 348
    char data_type[10];
    char db_name[18];
    std::int32_t extents;
    std::int16_t session_error;
    char regular;
    char dim_info;
    std::int16_t dim[8];        // dim[0] = ndim; dim[1]=x, dim[2]=y, dim[3]=z, dim[4]=t
    float intent_p1;
    float intent_p2;
    float intent_p3;
    std::int16_t intent_code;
    std::int16_t datatype;
    std::int16_t bitpix;
    std::int16_t slice_start;
    float pixdim[8];
    float vox_offset;
    float scl_slope;
    float scl_inter;
    std::int16_t slice_end;
    char slice_code;
    char xyzt_units;
    float cal_max;
    float cal_min;
    float slice_duration;
    float toffset;
    std::int32_t glmax;
    std::int32_t glmin;
    char descrip[80];
    char aux_file[24];
    std::int16_t qform_code;
    std::int16_t sform_code;
    float quatern_b;
    float quatern_c;
    float quatern_d;
    float qoffset_x;
    float qoffset_y;
    float qoffset_z;
    float srow_x[4];
    float srow_y[4];
    float srow_z[4];
    char intent_name[16];
    char magic[4];
};
static_assert(sizeof(Nifti1Header) == 348, "NIfTI-1 header must be 348 bytes");

enum NiftiDatatype : std::int16_t {
    DT_UINT8 = 2,
    DT_INT16 = 4,
    DT_INT32 = 8,
    DT_FLOAT32 = 16,
    DT_FLOAT64 = 64,
    DT_INT8 = 256,
    DT_UINT16 = 512,
    DT_UINT32 = 768,
    DT_INT64 = 1024,
    DT_UINT64 = 1280,
};

std::uint16_t bswap16(std::uint16_t v) { return static_cast<std::uint16_t>((v >> 8) | (v << 8)); }
std::uint32_t bswap32(std::uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0x0000FF00u) | ((v << 8) & 0x00FF0000u) | (v << 24);
}
std::uint64_t bswap64(std::uint64_t v) {
    return (static_cast<std::uint64_t>(bswap32(static_cast<std::uint32_t>(v))) << 32) |
           bswap32(static_cast<std::uint32_t>(v >> 32));
}

void swap_i16(std::int16_t& v) {
    std::uint16_t u;
    std::memcpy(&u, &v, 2);
    u = bswap16(u);
    std::memcpy(&v, &u, 2);
}
void swap_i32(std::int32_t& v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    u = bswap32(u);
    std::memcpy(&v, &u, 4);
}
void swap_f32(float& v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    u = bswap32(u);
    std::memcpy(&v, &u, 4);
}

void swap_header(Nifti1Header& h) {
    swap_i32(h.sizeof_hdr);
    swap_i32(h.extents);
    swap_i16(h.session_error);
    for (auto& d : h.dim) swap_i16(d);
    swap_f32(h.intent_p1);
    swap_f32(h.intent_p2);
    swap_f32(h.intent_p3);
    swap_i16(h.intent_code);
    swap_i16(h.datatype);
    swap_i16(h.bitpix);
    swap_i16(h.slice_start);
    for (auto& p : h.pixdim) swap_f32(p);
    swap_f32(h.vox_offset);
    swap_f32(h.scl_slope);
    swap_f32(h.scl_inter);
    swap_i16(h.slice_end);
    swap_f32(h.cal_max);
    swap_f32(h.cal_min);
    swap_f32(h.slice_duration);
    swap_f32(h.toffset);
    swap_i32(h.glmax);
    swap_i32(h.glmin);
    swap_i16(h.qform_code);
    swap_i16(h.sform_code);
    swap_f32(h.quatern_b);
    swap_f32(h.quatern_c);
    swap_f32(h.quatern_d);
    swap_f32(h.qoffset_x);
    swap_f32(h.qoffset_y);
    swap_f32(h.qoffset_z);
    for (auto& s : h.srow_x) swap_f32(s);
    for (auto& s : h.srow_y) swap_f32(s);
    for (auto& s : h.srow_z) swap_f32(s);
}

bool is_gzip(const std::vector<std::uint8_t>& bytes) {
    return bytes.size() >= 2 && bytes[0] == 0x1F && bytes[1] == 0x8B;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        throw Error(ErrorCode::NotFound, "no such file: " + path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed: " + path);
    return bytes;
}

std::vector<std::uint8_t> gunzip(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 32) != Z_OK)  // auto-detect zlib/gzip wrapper
        throw Error(ErrorCode::IoFailure, "inflateInit failed");
    std::vector<std::uint8_t> out;
    out.resize(bytes.size() * 4 + 1024);
    zs.next_in = const_cast<Bytef*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    std::size_t written = 0;
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        if (written == out.size()) out.resize(out.size() * 2);
        zs.next_out = out.data() + written;
        zs.avail_out = static_cast<uInt>(out.size() - written);
        rc = inflate(&zs, Z_NO_FLUSH);
        written = out.size() - zs.avail_out;
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw Error(ErrorCode::MalformedHeader, "corrupt gzip stream in " + path);
        }
    }
    inflateEnd(&zs);
    out.resize(written);
    return out;
}

std::vector<std::uint8_t> gzip_compress(const std::uint8_t* data, std::size_t size) {
    z_stream zs{};
    // 15+16 selects the gzip wrapper; zlib writes MTIME=0, so output bytes
    // depend only on the input data.
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw Error(ErrorCode::IoFailure, "deflateInit failed");
    std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(size)));
    zs.next_in = const_cast<Bytef*>(data);
    zs.avail_in = static_cast<uInt>(size);
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw Error(ErrorCode::IoFailure, "deflate failed");
    out.resize(out.size() - zs.avail_out);
    return out;
}

struct RawImage {
    Nifti1Header header;
    std::vector<std::uint8_t> voxel_bytes;
    bool swapped = false;
};

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string sibling_img_path(const std::string& hdr_path) {
    if (has_suffix(hdr_path, ".hdr.gz")) return hdr_path.substr(0, hdr_path.size() - 7) + ".img.gz";
    if (has_suffix(hdr_path, ".hdr")) return hdr_path.substr(0, hdr_path.size() - 4) + ".img";
    throw Error(ErrorCode::MalformedHeader,
                "two-file image (magic ni1) requires a .hdr path: " + hdr_path);
}

RawImage read_raw(const std::string& path) {
    std::vector<std::uint8_t> bytes = read_file(path);
    if (is_gzip(bytes)) bytes = gunzip(bytes, path);
    if (bytes.size() < sizeof(Nifti1Header))
        throw Error(ErrorCode::MalformedHeader, "file shorter than the 348-byte header: " + path);

    RawImage raw;
    std::memcpy(&raw.header, bytes.data(), sizeof(Nifti1Header));
    if (raw.header.sizeof_hdr != 348) {
        std::int32_t swapped = raw.header.sizeof_hdr;
        swap_i32(swapped);
        if (swapped != 348)
            throw Error(ErrorCode::MalformedHeader, "sizeof_hdr is not 348 in either byte order: " + path);
        swap_header(raw.header);
        raw.swapped = true;
    }

    const char* magic = raw.header.magic;
    bool single_file = std::memcmp(magic, "n+1", 4) == 0;
    bool two_file = std::memcmp(magic, "ni1", 4) == 0;
    if (!single_file && !two_file)
        throw Error(ErrorCode::MalformedHeader, "bad magic (expected n+1 or ni1): " + path);

    if (single_file) {
        std::size_t offset = static_cast<std::size_t>(raw.header.vox_offset);
        if (offset < sizeof(Nifti1Header) || offset > bytes.size())
            throw Error(ErrorCode::MalformedHeader, "vox_offset out of range: " + path);
        raw.voxel_bytes.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end());
    } else {
        std::vector<std::uint8_t> img = read_file(sibling_img_path(path));
        if (is_gzip(img)) img = gunzip(img, path);
        std::size_t offset = raw.header.vox_offset > 0 ? static_cast<std::size_t>(raw.header.vox_offset) : 0;
        if (offset > img.size())
            throw Error(ErrorCode::MalformedHeader, "vox_offset beyond .img size: " + path);
        raw.voxel_bytes.assign(img.begin() + static_cast<std::ptrdiff_t>(offset), img.end());
    }
    return raw;
}

int bytes_per_voxel(std::int16_t datatype, const std::string& path) {
    switch (datatype) {
        case DT_UINT8:
        case DT_INT8: return 1;
        case DT_INT16:
        case DT_UINT16: return 2;
        case DT_INT32:
        case DT_UINT32:
        case DT_FLOAT32: return 4;
        case DT_FLOAT64:
        case DT_INT64:
        case DT_UINT64: return 8;
        default:
            throw Error(ErrorCode::UnsupportedDatatype,
                        "datatype code " + std::to_string(datatype) + " not supported: " + path);
    }
}

template <typename T>
T read_scalar(const std::uint8_t* p, bool swapped) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    if (swapped) {
        if constexpr (sizeof(T) == 2) {
            std::uint16_t u;
            std::memcpy(&u, &v, 2);
            u = bswap16(u);
            std::memcpy(&v, &u, 2);
        } else if constexpr (sizeof(T) == 4) {
            std::uint32_t u;
            std::memcpy(&u, &v, 4);
            u = bswap32(u);
            std::memcpy(&v, &u, 4);
        } else if constexpr (sizeof(T) == 8) {
            std::uint64_t u;
            std::memcpy(&u, &v, 8);
            u = bswap64(u);
            std::memcpy(&v, &u, 8);
        }
    }
    return v;
}

template <typename T>
void decode_voxels(const std::uint8_t* src, std::int64_t count, bool swapped, float* dst) {
    for (std::int64_t i = 0; i < count; ++i)
        dst[i] = static_cast<float>(read_scalar<T>(src + i * sizeof(T), swapped));
}

std::vector<float> decode(const RawImage& raw, std::int64_t count, const std::string& path) {
    const int bpv = bytes_per_voxel(raw.header.datatype, path);
    if (static_cast<std::int64_t>(raw.voxel_bytes.size()) < count * bpv)
        throw Error(ErrorCode::MalformedHeader, "truncated voxel data: " + path);

    std::vector<float> out(static_cast<std::size_t>(count));
    const std::uint8_t* src = raw.voxel_bytes.data();
    switch (raw.header.datatype) {
        case DT_UINT8: decode_voxels<std::uint8_t>(src, count, false, out.data()); break;
        case DT_INT8: decode_voxels<std::int8_t>(src, count, false, out.data()); break;
        case DT_INT16: decode_voxels<std::int16_t>(src, count, raw.swapped, out.data()); break;
        case DT_UINT16: decode_voxels<std::uint16_t>(src, count, raw.swapped, out.data()); break;
        case DT_INT32: decode_voxels<std::int32_t>(src, count, raw.swapped, out.data()); break;
        case DT_UINT32: decode_voxels<std::uint32_t>(src, count, raw.swapped, out.data()); break;
        case DT_FLOAT32: decode_voxels<float>(src, count, raw.swapped, out.data()); break;
        case DT_FLOAT64: decode_voxels<double>(src, count, raw.swapped, out.data()); break;
        case DT_INT64: decode_voxels<std::int64_t>(src, count, raw.swapped, out.data()); break;
        case DT_UINT64: decode_voxels<std::uint64_t>(src, count, raw.swapped, out.data()); break;
        default: throw Error(ErrorCode::UnsupportedDatatype, "datatype: " + path);
    }

    float slope = raw.header.scl_slope;
    float inter = raw.header.scl_inter;
    if (slope != 0.f && !(slope == 1.f && inter == 0.f))
        for (float& v : out) v = v * slope + inter;
    return out;
}

struct Dims {
    std::int64_t x, y, z, t;
};

Dims parse_dims(const Nifti1Header& h, const std::string& path) {
    int ndim = h.dim[0];
    if (ndim < 3 || ndim > 7)
        throw Error(ErrorCode::MalformedHeader, "expected a 3D or 4D image, dim[0]=" + std::to_string(ndim) + ": " + path);
    for (int i = ndim + 1; i <= 7; ++i)
        if (h.dim[i] > 1)
            throw Error(ErrorCode::MalformedHeader, "dim beyond dim[0] is > 1: " + path);
    // Trailing singleton dims (some writers set dim[0]=5 with dim[5]=1) squeeze away.
    for (int i = 5; i <= ndim; ++i)
        if (h.dim[i] > 1)
            throw Error(ErrorCode::MalformedHeader, "images with more than 4 real dimensions are not supported: " + path);
    Dims d;
    d.x = h.dim[1];
    d.y = h.dim[2];
    d.z = h.dim[3];
    d.t = ndim >= 4 ? std::max<std::int64_t>(1, h.dim[4]) : 1;
    if (d.x < 1 || d.y < 1 || d.z < 1)
        throw Error(ErrorCode::MalformedHeader, "non-positive spatial extent: " + path);
    return d;
}

std::array<float, 16> affine_from_header(const Nifti1Header& h) {
    std::array<float, 16> a{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
    if (h.sform_code > 0) {
        for (int j = 0; j < 4; ++j) {
            a[0 * 4 + j] = h.srow_x[j];
            a[1 * 4 + j] = h.srow_y[j];
            a[2 * 4 + j] = h.srow_z[j];
        }
        return a;
    }
    if (h.qform_code > 0) {
        double b = h.quatern_b, c = h.quatern_c, d = h.quatern_d;
        double aa = 1.0 - (b * b + c * c + d * d);
        aa = aa < 0.0 ? 0.0 : std::sqrt(aa);
        double qfac = h.pixdim[0] < 0.f ? -1.0 : 1.0;
        double sx = h.pixdim[1] > 0.f ? h.pixdim[1] : 1.0;
        double sy = h.pixdim[2] > 0.f ? h.pixdim[2] : 1.0;
        double sz = (h.pixdim[3] > 0.f ? h.pixdim[3] : 1.0) * qfac;
        double r[3][3] = {
            {aa * aa + b * b - c * c - d * d, 2 * (b * c - aa * d), 2 * (b * d + aa * c)},
            {2 * (b * c + aa * d), aa * aa + c * c - b * b - d * d, 2 * (c * d - aa * b)},
            {2 * (b * d - aa * c), 2 * (c * d + aa * b), aa * aa + d * d - b * b - c * c},
        };
        double scale[3] = {sx, sy, sz};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a[i * 4 + j] = static_cast<float>(r[i][j] * scale[j]);
        a[0 * 4 + 3] = h.qoffset_x;
        a[1 * 4 + 3] = h.qoffset_y;
        a[2 * 4 + 3] = h.qoffset_z;
        return a;
    }
    a[0] = h.pixdim[1] > 0.f ? h.pixdim[1] : 1.f;
    a[5] = h.pixdim[2] > 0.f ? h.pixdim[2] : 1.f;
    a[10] = h.pixdim[3] > 0.f ? h.pixdim[3] : 1.f;
    return a;
}

std::array<float, 3> spacing_from_header(const Nifti1Header& h) {
    auto positive = [](float v) { return v > 0.f ? v : 1.f; };
    return {positive(h.pixdim[3]), positive(h.pixdim[2]), positive(h.pixdim[1])};  // z, y, x
}

Nifti1Header make_header(const std::array<std::int64_t, 4>& shape,
                         const std::array<float, 3>& spacing,
                         const std::array<float, 16>& affine, std::int16_t datatype,
                         std::int16_t bitpix, bool four_d) {
    for (auto extent : shape)
        if (extent > 32767)
            throw Error(ErrorCode::InvalidArgument, "extent exceeds the NIfTI-1 int16 dim limit");
    Nifti1Header h{};
    h.sizeof_hdr = 348;
    h.regular = 'r';
    h.dim[0] = four_d ? 4 : 3;
    h.dim[1] = static_cast<std::int16_t>(shape[3]);  // x
    h.dim[2] = static_cast<std::int16_t>(shape[2]);  // y
    h.dim[3] = static_cast<std::int16_t>(shape[1]);  // z
    h.dim[4] = four_d ? static_cast<std::int16_t>(shape[0]) : 1;
    for (int i = four_d ? 5 : 4; i <= 7; ++i) h.dim[i] = 1;
    h.datatype = datatype;
    h.bitpix = bitpix;
    h.pixdim[0] = 1.f;
    h.pixdim[1] = spacing[2];
    h.pixdim[2] = spacing[1];
    h.pixdim[3] = spacing[0];
    h.pixdim[4] = 1.f;
    h.vox_offset = 352.f;
    h.scl_slope = 1.f;
    h.scl_inter = 0.f;
    h.xyzt_units = 2;  // NIFTI_UNITS_MM
    h.sform_code = 1;  // NIFTI_XFORM_SCANNER_ANAT
    h.qform_code = 0;
    for (int j = 0; j < 4; ++j) {
        h.srow_x[j] = affine[0 * 4 + j];
        h.srow_y[j] = affine[1 * 4 + j];
        h.srow_z[j] = affine[2 * 4 + j];
    }
    std::memcpy(h.magic, "n+1", 4);
    return h;
}

void write_bytes(const std::string& path, const std::uint8_t* header_and_data, std::size_t size) {
    std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        if (!std::filesystem::is_directory(parent, ec))
            throw Error(ErrorCode::IoFailure, "parent directory does not exist: " + parent.string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(header_and_data), static_cast<std::streamsize>(size));
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path);
}

void write_image(const std::string& path, const Nifti1Header& header, const std::uint8_t* voxels,
                 std::size_t voxel_bytes) {
    std::vector<std::uint8_t> blob(352 + voxel_bytes);  // bytes 348..351 stay 0: no extensions
    std::memcpy(blob.data(), &header, sizeof(Nifti1Header));
    if (voxel_bytes > 0) std::memcpy(blob.data() + 352, voxels, voxel_bytes);
    if (has_suffix(path, ".gz")) {
        std::vector<std::uint8_t> packed = gzip_compress(blob.data(), blob.size());
        write_bytes(path, packed.data(), packed.size());
    } else {
        write_bytes(path, blob.data(), blob.size());
    }
}

}  // namespace

Volume load_volume(const std::string& path) {
    RawImage raw = read_raw(path);
    Dims d = parse_dims(raw.header, path);
    std::int64_t count = d.x * d.y * d.z * d.t;
    std::vector<float> values = decode(raw, count, path);

    // NIfTI stores x fastest, then y, z, t — identical linear order to our
    // (c, z, y, x) layout, so no axis shuffling happens here.
    std::int64_t nonfinite = 0;
    for (float v : values)
        if (!std::isfinite(v)) ++nonfinite;
    if (nonfinite > 0)
        throw Error(ErrorCode::NonFiniteData,
                    std::to_string(nonfinite) + " non-finite voxel(s) in " + path);

    Volume v;
    v.shape = {d.t, d.z, d.y, d.x};
    v.spacing = spacing_from_header(raw.header);
    v.affine = affine_from_header(raw.header);
    v.data = std::move(values);
    v.validate();
    return v;
}

void save_volume(const Volume& v, const std::string& path) {
    v.validate();
    Nifti1Header h = make_header(v.shape, v.spacing, v.affine, DT_FLOAT32, 32, v.shape[0] > 1);
    write_image(path, h, reinterpret_cast<const std::uint8_t*>(v.data.data()),
                v.data.size() * sizeof(float));
}

SegMask load_mask(const std::string& path) {
    RawImage raw = read_raw(path);
    Dims d = parse_dims(raw.header, path);
    if (d.t != 1)
        throw Error(ErrorCode::MalformedHeader, "label maps must be 3D: " + path);
    std::int64_t count = d.x * d.y * d.z;
    std::vector<float> values = decode(raw, count, path);

    SegMask m;
    m.shape = {d.z, d.y, d.x};
    m.spacing = spacing_from_header(raw.header);
    m.affine = affine_from_header(raw.header);
    m.labels.resize(static_cast<std::size_t>(count));

    std::int64_t bad_count = 0;
    float first_bad = 0.f;
    for (std::int64_t i = 0; i < count; ++i) {
        float f = values[static_cast<std::size_t>(i)];
        bool integral = std::isfinite(f) && f == std::floor(f) && f >= 0.f && f <= 255.f;
        std::uint8_t label = integral ? static_cast<std::uint8_t>(f) : 255;
        if (!integral || !is_legal_label(label)) {
            if (bad_count == 0) first_bad = f;
            ++bad_count;
        } else {
            m.labels[static_cast<std::size_t>(i)] = label;
        }
    }
    if (bad_count > 0)
        throw Error(ErrorCode::IllegalLabel, "value " + std::to_string(first_bad) + " (and " +
                                                 std::to_string(bad_count - 1) +
                                                 " more voxel(s)) outside {0,1,2,4}: " + path);
    return m;
}

void save_mask(const SegMask& m, const std::string& path) {
    m.validate();
    std::array<std::int64_t, 4> shape4{1, m.shape[0], m.shape[1], m.shape[2]};
    Nifti1Header h = make_header(shape4, m.spacing, m.affine, DT_UINT8, 8, false);
    write_image(path, h, m.labels.data(), m.labels.size());
}

}  // namespace voxaug::nifti
