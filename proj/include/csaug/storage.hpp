#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "csaug/volume.hpp"

namespace csaug {

// Dataset manifest: a versioned plain-text file, one key per line, followed by
// one `entry <id> <image path> <mask path>` line per pair. Paths are relative
// to the manifest's directory and must not contain whitespace. Ids must be
// exactly 0..N-1 in order.
struct ManifestEntry {
    std::size_t id = 0;
    std::string image_path;
    std::string mask_path;
};

struct DatasetManifest {
    std::uint32_t levels = 256;
    Shape shape;
    std::uint32_t classes = 2;
    std::optional<std::size_t> sym_dim;
    /// Min/max intensity bounds used to quantize floating-point payloads.
    std::optional<std::pair<double, double>> quant_bounds;
    /// Voxel spacing, carried verbatim into sidecars and never interpreted.
    std::optional<std::string> spacing;
    std::vector<ManifestEntry> entries;
};

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct LoadedDataset {
    std::vector<Volume> images;
    std::vector<LabelMask> masks;
    DatasetManifest manifest;
};

LoadedDataset load_dataset(const std::filesystem::path& manifest_path);

// 2D pairs are stored as binary PGM (8-bit, or 16-bit big-endian per the PNM
// standard, chosen by the level/class count). 3D pairs are stored as a raw
// little-endian payload plus a `.hdr` text sidecar carrying shape, level or
// class count, dtype, byte order, and optional spacing. Both round-trip
// bit-exactly.
struct PairPaths {
    std::filesystem::path image;
    std::filesystem::path mask;
};

PairPaths write_pair(const Volume& v, const LabelMask& m, const std::filesystem::path& dir,
                     const std::string& name, const std::optional<std::string>& spacing = {});

Volume read_volume(const std::filesystem::path& path, std::uint32_t levels,
                   std::optional<std::pair<double, double>> quant_bounds = {});
LabelMask read_mask(const std::filesystem::path& path, std::uint32_t classes);
/// Reads a mask without a declared class count (inferred as max label + 1).
LabelMask read_mask_auto(const std::filesystem::path& path);

void write_volume(const std::filesystem::path& path, const Volume& v,
                  const std::optional<std::string>& spacing = {});
void write_mask(const std::filesystem::path& path, const LabelMask& m,
                const std::optional<std::string>& spacing = {});

}  // namespace csaug
