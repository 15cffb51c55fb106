#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csaug/volume.hpp"

namespace csaug {

enum class SynthKind {
    blob,  ///< bright ellipsoid at a jittered-but-consistent location
    sym,   ///< exactly mirror-symmetric along sym_dim
};

struct SynthConfig {
    SynthKind kind = SynthKind::blob;
    std::size_t count = 1;
    Shape shape;
    std::uint32_t levels = 256;
    std::uint32_t classes = 2;
    std::size_t sym_dim = 0;  // sym kind only
    std::uint64_t seed = 0;
};

struct SynthDataset {
    std::vector<Volume> images;
    std::vector<LabelMask> masks;
    std::optional<std::size_t> sym_dim;
};

/// Deterministic per (config, seed): the same config always produces the same
/// fixtures, on any platform.
SynthDataset synth_dataset(const SynthConfig& config);

}  // namespace csaug
