#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "csaug/volume.hpp"

namespace csaug {

/// Cumulative distribution scaled to [0, L-1]: values[r] = (L-1) * cum[r] / total.
struct ScaledCdf {
    std::uint32_t levels = 0;
    std::vector<double> values;
};

/// Monotone per-level remapping realizing discrete histogram matching.
struct LevelMap {
    std::uint32_t levels = 0;
    std::vector<Level> map;
};

ScaledCdf scaled_cdf(const Histogram& h);

// map[r] = smallest z with G(z) >= T(r), where T and G are the scaled CDFs of
// source and reference. Ties are decided exactly: the comparison is evaluated
// as cum_ref[z] * total_src >= cum_src[r] * total_ref in integer arithmetic,
// which is the same inequality with both sides multiplied by
// total_src * total_ref / (L-1). Self-matching is the identity on levels that
// occur in the source.
LevelMap build_level_map(const Histogram& source, const Histogram& reference);

Volume apply_level_map(const Volume& v, const LevelMap& m);

Volume match_to_reference(const Volume& v, const Volume& ref);

/// First matching pass: every volume matched to the dataset average image.
std::vector<Volume> normalize_dataset(std::span<const Volume> vs);

/// Second matching pass: every volume matched to the average of the distinct
/// volumes in the group. Duplicate inputs map to identical outputs.
std::vector<Volume> match_group(std::span<const Volume> vs);

}  // namespace csaug
