#include "csaug/storage.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csaug {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& message) {
    throw std::runtime_error(path.string() + ": " + message);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(path, "cannot open for writing");
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(path, "cannot open for reading");
    }
    return in;
}

// ---------------------------------------------------------------------------
// PGM (binary P5)
// ---------------------------------------------------------------------------

void write_pgm(const std::filesystem::path& path, const Shape& shape,
               std::span<const Level> data, std::uint32_t maxval) {
    auto out = open_out(path);
    out << "P5\n" << shape[1] << ' ' << shape[0] << '\n' << maxval << '\n';
    if (maxval < 256) {
        std::vector<unsigned char> bytes(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            bytes[i] = static_cast<unsigned char>(data[i]);
        }
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    } else {
        // 16-bit PGM samples are most-significant byte first per the standard.
        std::vector<unsigned char> bytes(data.size() * 2);
        for (std::size_t i = 0; i < data.size(); ++i) {
            bytes[2 * i] = static_cast<unsigned char>(data[i] >> 8);
            bytes[2 * i + 1] = static_cast<unsigned char>(data[i] & 0xff);
        }
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    if (!out) {
        fail(path, "write failed");
    }
}

int pgm_token(std::istream& in) {
    // Skips whitespace and '#' comment lines, then reads one decimal token.
    char c;
    while (in.get(c)) {
        if (c == '#') {
            while (in.get(c) && c != '\n') {
            }
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            in.unget();
            break;
        }
    }
    int value = -1;
    in >> value;
    return value;
}

struct PgmImage {
    Shape shape;
    std::uint32_t maxval = 0;
    std::vector<Level> samples;
};

PgmImage read_pgm(const std::filesystem::path& path) {
    auto in = open_in(path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5') {
        fail(path, "not a binary PGM (P5) file");
    }
    const int width = pgm_token(in);
    const int height = pgm_token(in);
    const int maxval = pgm_token(in);
    if (!in || width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
        fail(path, "malformed PGM header");
    }
    in.get();  // single whitespace byte before the payload

    PgmImage img;
    img.shape = {static_cast<std::size_t>(height), static_cast<std::size_t>(width)};
    img.maxval = static_cast<std::uint32_t>(maxval);
    const std::size_t count = img.shape[0] * img.shape[1];
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> bytes(count * bytes_per);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
        fail(path, "truncated PGM payload");
    }
    img.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t v = bytes_per == 1
                                    ? bytes[i]
                                    : (static_cast<std::uint32_t>(bytes[2 * i]) << 8) | bytes[2 * i + 1];
        if (v > img.maxval) {
            fail(path, "sample exceeds the declared maxval");
        }
        img.samples[i] = static_cast<Level>(v);
    }
    return img;
}

// ---------------------------------------------------------------------------
// Raw payload + text sidecar
// ---------------------------------------------------------------------------

struct RawHeader {
    Shape shape;
    std::string dtype;  // u8 | u16 | f32 | f64
    std::uint32_t count_levels = 0;  // `levels` for images, `classes` for masks
    std::string count_key;           // which of the two the sidecar carried
    std::optional<std::string> spacing;
};

std::filesystem::path sidecar_path(const std::filesystem::path& raw_path) {
    std::filesystem::path p = raw_path;
    p.replace_extension(".hdr");
    return p;
}

void write_raw(const std::filesystem::path& raw_path, const Shape& shape,
               std::span<const Level> data, const std::string& count_key, std::uint32_t count,
               const std::optional<std::string>& spacing) {
    const std::string dtype = count <= 256 ? "u8" : "u16";
    {
        auto hdr = open_out(sidecar_path(raw_path));
        hdr << "csaug-raw v1\n";
        hdr << "rank " << shape.size() << '\n';
        hdr << "shape";
        for (const std::size_t e : shape) {
            hdr << ' ' << e;
        }
        hdr << '\n';
        hdr << "dtype " << dtype << '\n';
        hdr << "order le\n";
        hdr << count_key << ' ' << count << '\n';
        if (spacing.has_value()) {
            hdr << "spacing " << *spacing << '\n';
        }
        if (!hdr) {
            fail(sidecar_path(raw_path), "write failed");
        }
    }
    auto out = open_out(raw_path);
    if (dtype == "u8") {
        std::vector<unsigned char> bytes(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            bytes[i] = static_cast<unsigned char>(data[i]);
        }
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    } else {
        std::vector<unsigned char> bytes(data.size() * 2);
        for (std::size_t i = 0; i < data.size(); ++i) {
            bytes[2 * i] = static_cast<unsigned char>(data[i] & 0xff);
            bytes[2 * i + 1] = static_cast<unsigned char>(data[i] >> 8);
        }
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    if (!out) {
        fail(raw_path, "write failed");
    }
}

RawHeader read_raw_header(const std::filesystem::path& hdr_path) {
    auto in = open_in(hdr_path);
    std::string line;
    if (!std::getline(in, line) || line != "csaug-raw v1") {
        fail(hdr_path, "missing or unsupported format tag (expected 'csaug-raw v1')");
    }
    RawHeader hdr;
    std::size_t rank = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "rank") {
            ls >> rank;
        } else if (key == "shape") {
            std::size_t e;
            while (ls >> e) {
                hdr.shape.push_back(e);
            }
        } else if (key == "dtype") {
            ls >> hdr.dtype;
        } else if (key == "order") {
            std::string order;
            ls >> order;
            if (order != "le") {
                fail(hdr_path, "unsupported byte order '" + order + "' (only le)");
            }
        } else if (key == "levels" || key == "classes") {
            hdr.count_key = key;
            ls >> hdr.count_levels;
        } else if (key == "spacing") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') {
                rest.erase(rest.begin());
            }
            hdr.spacing = rest;
        } else {
            fail(hdr_path, "unknown sidecar key '" + key + "'");
        }
    }
    if (hdr.shape.empty() || rank != hdr.shape.size()) {
        fail(hdr_path, "rank and shape disagree");
    }
    if (hdr.dtype != "u8" && hdr.dtype != "u16" && hdr.dtype != "f32" && hdr.dtype != "f64") {
        fail(hdr_path, "unsupported dtype '" + hdr.dtype + "'");
    }
    // Float payloads are quantized against manifest bounds, so the sidecar
    // need not carry a level count for them.
    if (hdr.count_levels == 0 && hdr.dtype[0] == 'u') {
        fail(hdr_path, "missing levels/classes line");
    }
    return hdr;
}

std::size_t dtype_size(const std::string& dtype) {
    if (dtype == "u8") return 1;
    if (dtype == "u16") return 2;
    if (dtype == "f32") return 4;
    return 8;
}

std::vector<unsigned char> read_payload(const std::filesystem::path& raw_path,
                                        const RawHeader& hdr) {
    auto in = open_in(raw_path);
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0);
    const std::size_t expected = shape_product(hdr.shape) * dtype_size(hdr.dtype);
    if (size != expected) {
        fail(raw_path, "corrupt payload: " + std::to_string(size) + " bytes, expected " +
                           std::to_string(expected));
    }
    std::vector<unsigned char> bytes(size);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in.gcount()) != size) {
        fail(raw_path, "read failed");
    }
    return bytes;
}

std::uint32_t le16(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8);
}

template <typename FloatT>
FloatT le_float(const unsigned char* p) {
    FloatT v;
    std::memcpy(&v, p, sizeof(FloatT));  // host is little-endian on all targets we build for
    return v;
}

Level quantize(double x, double lo, double hi, std::uint32_t levels,
               const std::filesystem::path& path) {
    if (std::isnan(x)) {
        fail(path, "NaN sample in floating-point payload");
    }
    const double t = (x - lo) / (hi - lo) * static_cast<double>(levels - 1);
    if (t <= 0.0) {
        return 0;
    }
    const double q = std::floor(t + 0.5);  // half away from zero for t > 0
    const double top = static_cast<double>(levels - 1);
    return static_cast<Level>(q >= top ? top : q);
}

std::vector<Level> decode_raw_samples(const std::filesystem::path& raw_path, const RawHeader& hdr,
                                      std::uint32_t limit,
                                      std::optional<std::pair<double, double>> quant_bounds) {
    const auto bytes = read_payload(raw_path, hdr);
    const std::size_t count = shape_product(hdr.shape);
    std::vector<Level> samples(count);
    if (hdr.dtype == "u8" || hdr.dtype == "u16") {
        for (std::size_t i = 0; i < count; ++i) {
            const std::uint32_t v = hdr.dtype == "u8" ? bytes[i] : le16(&bytes[2 * i]);
            if (v >= limit) {
                fail(raw_path, "sample " + std::to_string(v) + " out of range [0, " +
                                   std::to_string(limit - 1) + "]");
            }
            samples[i] = static_cast<Level>(v);
        }
    } else {
        if (!quant_bounds.has_value()) {
            fail(raw_path, "floating-point payload needs quantization bounds in the manifest");
        }
        const auto [lo, hi] = *quant_bounds;
        if (!(hi > lo)) {
            fail(raw_path, "quantization bounds must satisfy min < max");
        }
        for (std::size_t i = 0; i < count; ++i) {
            const double x = hdr.dtype == "f32" ? static_cast<double>(le_float<float>(&bytes[4 * i]))
                                                : le_float<double>(&bytes[8 * i]);
            samples[i] = quantize(x, lo, hi, limit, raw_path);
        }
    }
    return samples;
}

bool is_raw_path(const std::filesystem::path& path) {
    return path.extension() == ".raw" || path.extension() == ".hdr";
}

std::filesystem::path payload_path(const std::filesystem::path& path) {
    std::filesystem::path p = path;
    p.replace_extension(".raw");
    return p;
}

/// Monotone rescale of integer samples from [0, maxval] onto [0, levels-1].
Level rescale(std::uint64_t v, std::uint64_t maxval, std::uint32_t levels) {
    return static_cast<Level>((2 * v * (levels - 1) + maxval) / (2 * maxval));
}

}  // namespace

// ---------------------------------------------------------------------------
// Volumes and masks
// ---------------------------------------------------------------------------

void write_volume(const std::filesystem::path& path, const Volume& v,
                  const std::optional<std::string>& spacing) {
    if (v.rank() == 2) {
        write_pgm(path, v.shape(), v.data(), v.levels() - 1);
    } else {
        write_raw(payload_path(path), v.shape(), v.data(), "levels", v.levels(), spacing);
    }
}

void write_mask(const std::filesystem::path& path, const LabelMask& m,
                const std::optional<std::string>& spacing) {
    if (m.rank() == 2) {
        write_pgm(path, m.shape(), m.data(), std::max<std::uint32_t>(m.classes() - 1, 1));
    } else {
        write_raw(payload_path(path), m.shape(), m.data(), "classes", m.classes(), spacing);
    }
}

Volume read_volume(const std::filesystem::path& path, std::uint32_t levels,
                   std::optional<std::pair<double, double>> quant_bounds) {
    if (is_raw_path(path)) {
        const RawHeader hdr = read_raw_header(sidecar_path(path));
        if (hdr.count_key == "classes") {
            fail(path, "sidecar describes a mask, not an image");
        }
        if (hdr.dtype[0] == 'u' && hdr.count_levels != levels) {
            fail(path, "sidecar levels " + std::to_string(hdr.count_levels) +
                           " differ from expected " + std::to_string(levels));
        }
        auto samples = decode_raw_samples(payload_path(path), hdr, levels, quant_bounds);
        return Volume(hdr.shape, levels, std::move(samples));
    }
    PgmImage img = read_pgm(path);
    if (img.maxval == levels - 1) {
        return Volume(img.shape, levels, std::move(img.samples));
    }
    std::vector<Level> rescaled(img.samples.size());
    for (std::size_t i = 0; i < img.samples.size(); ++i) {
        rescaled[i] = rescale(img.samples[i], img.maxval, levels);
    }
    return Volume(img.shape, levels, std::move(rescaled));
}

LabelMask read_mask(const std::filesystem::path& path, std::uint32_t classes) {
    if (is_raw_path(path)) {
        const RawHeader hdr = read_raw_header(sidecar_path(path));
        if (hdr.count_key != "classes") {
            fail(path, "sidecar describes an image, not a mask");
        }
        if (hdr.dtype[0] != 'u') {
            fail(path, "mask payloads must be integer, got dtype " + hdr.dtype);
        }
        auto samples = decode_raw_samples(payload_path(path), hdr, classes, std::nullopt);
        return LabelMask(hdr.shape, classes, std::move(samples));
    }
    PgmImage img = read_pgm(path);
    // Labels are categorical: never rescaled, only range-checked.
    for (const Level v : img.samples) {
        if (v >= classes) {
            fail(path, "label " + std::to_string(v) + " out of range [0, " +
                           std::to_string(classes - 1) + "]");
        }
    }
    return LabelMask(img.shape, classes, std::move(img.samples));
}

LabelMask read_mask_auto(const std::filesystem::path& path) {
    std::uint32_t classes = 1;
    if (is_raw_path(path)) {
        const RawHeader hdr = read_raw_header(sidecar_path(path));
        if (hdr.count_key == "classes") {
            classes = hdr.count_levels;
        }
        return read_mask(path, classes);
    }
    PgmImage img = read_pgm(path);
    for (const Level v : img.samples) {
        classes = std::max(classes, static_cast<std::uint32_t>(v) + 1);
    }
    return LabelMask(img.shape, classes, std::move(img.samples));
}

PairPaths write_pair(const Volume& v, const LabelMask& m, const std::filesystem::path& dir,
                     const std::string& name, const std::optional<std::string>& spacing) {
    if (v.shape() != m.shape()) {
        throw std::invalid_argument("image and mask shapes differ");
    }
    std::filesystem::create_directories(dir);
    const std::string ext = v.rank() == 2 ? ".pgm" : ".raw";
    PairPaths paths{dir / (name + "_img" + ext), dir / (name + "_msk" + ext)};
    write_volume(paths.image, v, spacing);
    write_mask(paths.mask, m, spacing);
    return paths;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

DatasetManifest read_manifest(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != "csaug-dataset v1") {
        fail(path, "missing or unsupported format tag (expected 'csaug-dataset v1')");
    }
    DatasetManifest m;
    bool saw_levels = false, saw_shape = false, saw_classes = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        const auto bad = [&](const std::string& what) {
            fail(path, "line " + std::to_string(line_no) + ": " + what);
        };
        if (key == "levels") {
            if (!(ls >> m.levels)) bad("malformed levels");
            saw_levels = true;
        } else if (key == "shape") {
            m.shape.clear();
            std::size_t e;
            while (ls >> e) {
                m.shape.push_back(e);
            }
            if (m.shape.size() != 2 && m.shape.size() != 3) bad("shape must have 2 or 3 extents");
            saw_shape = true;
        } else if (key == "classes") {
            if (!(ls >> m.classes)) bad("malformed classes");
            saw_classes = true;
        } else if (key == "sym_dim") {
            std::size_t d;
            if (!(ls >> d)) bad("malformed sym_dim");
            m.sym_dim = d;
        } else if (key == "quant") {
            double lo, hi;
            if (!(ls >> lo >> hi)) bad("quant needs two bounds");
            m.quant_bounds = {lo, hi};
        } else if (key == "spacing") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') {
                rest.erase(rest.begin());
            }
            m.spacing = rest;
        } else if (key == "entry") {
            ManifestEntry e;
            if (!(ls >> e.id >> e.image_path >> e.mask_path)) bad("malformed entry");
            if (e.id != m.entries.size()) {
                bad("entry ids must be 0..N-1 in order, got " + std::to_string(e.id));
            }
            m.entries.push_back(std::move(e));
        } else {
            bad("unknown key '" + key + "'");
        }
    }
    if (!saw_levels || !saw_shape || !saw_classes) {
        fail(path, "manifest must declare levels, shape, and classes");
    }
    if (m.sym_dim.has_value() && *m.sym_dim >= m.shape.size()) {
        fail(path, "sym_dim out of range for the declared shape");
    }
    return m;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
    auto out = open_out(path);
    out << "csaug-dataset v1\n";
    out << "levels " << manifest.levels << '\n';
    out << "shape";
    for (const std::size_t e : manifest.shape) {
        out << ' ' << e;
    }
    out << '\n';
    out << "classes " << manifest.classes << '\n';
    if (manifest.sym_dim.has_value()) {
        out << "sym_dim " << *manifest.sym_dim << '\n';
    }
    if (manifest.quant_bounds.has_value()) {
        out << "quant " << manifest.quant_bounds->first << ' ' << manifest.quant_bounds->second
            << '\n';
    }
    if (manifest.spacing.has_value()) {
        out << "spacing " << *manifest.spacing << '\n';
    }
    for (const ManifestEntry& e : manifest.entries) {
        out << "entry " << e.id << ' ' << e.image_path << ' ' << e.mask_path << '\n';
    }
    if (!out) {
        fail(path, "write failed");
    }
}

LoadedDataset load_dataset(const std::filesystem::path& manifest_path) {
    LoadedDataset ds;
    ds.manifest = read_manifest(manifest_path);
    const std::filesystem::path base = manifest_path.parent_path();
    ds.images.reserve(ds.manifest.entries.size());
    ds.masks.reserve(ds.manifest.entries.size());
    for (const ManifestEntry& e : ds.manifest.entries) {
        const auto describe = [&](const std::string& what) {
            return "entry " + std::to_string(e.id) + ": " + what;
        };
        Volume v = read_volume(base / e.image_path, ds.manifest.levels, ds.manifest.quant_bounds);
        if (v.shape() != ds.manifest.shape) {
            fail(manifest_path, describe("image shape does not match the manifest shape"));
        }
        LabelMask m = read_mask(base / e.mask_path, ds.manifest.classes);
        if (m.shape() != ds.manifest.shape) {
            fail(manifest_path, describe("mask shape does not match the manifest shape"));
        }
        ds.images.push_back(std::move(v));
        ds.masks.push_back(std::move(m));
    }
    return ds;
}

}  // namespace csaug
