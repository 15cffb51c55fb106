#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "csaug/volume.hpp"

namespace csaug::kernels {

/// Arrays smaller than this run the serial path even when OpenMP is enabled.
inline constexpr std::size_t parallel_grain = std::size_t{1} << 14;

bool openmp_enabled();

struct OverlapCounts {
    std::uint64_t pred = 0;
    std::uint64_t truth = 0;
    std::uint64_t both = 0;
};

// Serial reference implementations. The dispatching entry points below must
// produce bit-identical results; tests and the benchmark compare the two.
namespace serial {

void apply_lut(std::span<const Level> src, std::span<const Level> lut, std::span<Level> dst);

void accumulate_histogram(std::span<const Level> data, std::span<std::uint64_t> counts);

/// dst[i] = round_half_away(mean over sources at i). All sources same length as dst.
void average_rounded(std::span<const Level* const> sources, std::span<Level> dst);

/// Row-wise mirrored copy along `dim`. src and dst are distinct buffers.
void flip(const Shape& shape, std::span<const Level> src, std::size_t dim, std::span<Level> dst);

OverlapCounts label_overlap(std::span<const Label> pred, std::span<const Label> truth, Label cls);

}  // namespace serial

void apply_lut(std::span<const Level> src, std::span<const Level> lut, std::span<Level> dst);
void accumulate_histogram(std::span<const Level> data, std::span<std::uint64_t> counts);
void average_rounded(std::span<const Level* const> sources, std::span<Level> dst);
void flip(const Shape& shape, std::span<const Level> src, std::size_t dim, std::span<Level> dst);
OverlapCounts label_overlap(std::span<const Label> pred, std::span<const Label> truth, Label cls);

/// Copies the sub-grid at offset/extent out of src (row-major) into dst, packed.
void copy_block_out(const Shape& src_shape, std::span<const Level> src,
                    const std::vector<std::size_t>& offset, const Shape& extent,
                    std::span<Level> dst);

/// Writes a packed fragment into the sub-grid at offset/extent of dst.
void copy_block_in(const Shape& dst_shape, std::span<Level> dst,
                   const std::vector<std::size_t>& offset, const Shape& extent,
                   std::span<const Level> src);

}  // namespace csaug::kernels
