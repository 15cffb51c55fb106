#include "csaug/kernels.hpp"

#include <cassert>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csaug::kernels {

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

namespace serial {

void apply_lut(std::span<const Level> src, std::span<const Level> lut, std::span<Level> dst) {
    assert(src.size() == dst.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = lut[src[i]];
    }
}

void accumulate_histogram(std::span<const Level> data, std::span<std::uint64_t> counts) {
    for (const Level v : data) {
        ++counts[v];
    }
}

void average_rounded(std::span<const Level* const> sources, std::span<Level> dst) {
    const std::uint64_t m = sources.size();
    assert(m > 0);
    for (std::size_t i = 0; i < dst.size(); ++i) {
        std::uint64_t sum = 0;
        for (const Level* src : sources) {
            sum += src[i];
        }
        // round half away from zero; values are non-negative
        dst[i] = static_cast<Level>((2 * sum + m) / (2 * m));
    }
}

namespace {

struct FlipLayout {
    std::size_t rows;        // product of all extents but the last
    std::size_t row_len;     // last extent
    std::size_t dim_extent;  // extent of the flipped dimension
    std::size_t dim_stride;  // row-index stride of the flipped dimension (rows space)
};

FlipLayout flip_layout(const Shape& shape, std::size_t dim) {
    FlipLayout fl{};
    fl.row_len = shape.back();
    fl.rows = 1;
    for (std::size_t d = 0; d + 1 < shape.size(); ++d) {
        fl.rows *= shape[d];
    }
    fl.dim_extent = shape[dim];
    fl.dim_stride = 1;
    for (std::size_t d = dim + 1; d + 1 < shape.size(); ++d) {
        fl.dim_stride *= shape[d];
    }
    return fl;
}

inline std::size_t mirrored_row(const FlipLayout& fl, std::size_t row) {
    const std::size_t coord = (row / fl.dim_stride) % fl.dim_extent;
    const std::size_t mirrored = fl.dim_extent - 1 - coord;
    return row + (mirrored - coord) * fl.dim_stride;
}

inline void flip_one_row(const FlipLayout& fl, std::span<const Level> src, std::size_t dim_is_last,
                         std::size_t row, std::span<Level> dst) {
    Level* out = dst.data() + row * fl.row_len;
    if (dim_is_last) {
        const Level* in = src.data() + row * fl.row_len;
        for (std::size_t j = 0; j < fl.row_len; ++j) {
            out[j] = in[fl.row_len - 1 - j];
        }
    } else {
        const Level* in = src.data() + mirrored_row(fl, row) * fl.row_len;
        std::memcpy(out, in, fl.row_len * sizeof(Level));
    }
}

}  // namespace

void flip(const Shape& shape, std::span<const Level> src, std::size_t dim, std::span<Level> dst) {
    assert(src.size() == dst.size());
    const FlipLayout fl = flip_layout(shape, dim);
    const bool last = dim + 1 == shape.size();
    for (std::size_t row = 0; row < fl.rows; ++row) {
        flip_one_row(fl, src, last, row, dst);
    }
}

OverlapCounts label_overlap(std::span<const Label> pred, std::span<const Label> truth, Label cls) {
    OverlapCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] == cls;
        const bool t = truth[i] == cls;
        c.pred += p;
        c.truth += t;
        c.both += p && t;
    }
    return c;
}

}  // namespace serial

#ifdef _OPENMP

void apply_lut(std::span<const Level> src, std::span<const Level> lut, std::span<Level> dst) {
    const std::size_t n = src.size();
    if (n < parallel_grain) {
        serial::apply_lut(src, lut, dst);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = lut[src[i]];
    }
}

void accumulate_histogram(std::span<const Level> data, std::span<std::uint64_t> counts) {
    const std::size_t n = data.size();
    if (n < parallel_grain) {
        serial::accumulate_histogram(data, counts);
        return;
    }
    const std::size_t levels = counts.size();
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(levels, 0);
#pragma omp for schedule(static) nowait
        for (std::size_t i = 0; i < n; ++i) {
            ++local[data[i]];
        }
#pragma omp critical(csaug_hist_merge)
        for (std::size_t k = 0; k < levels; ++k) {
            counts[k] += local[k];
        }
    }
}

void average_rounded(std::span<const Level* const> sources, std::span<Level> dst) {
    const std::size_t n = dst.size();
    const std::uint64_t m = sources.size();
    if (n * m < parallel_grain) {
        serial::average_rounded(sources, dst);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t sum = 0;
        for (const Level* src : sources) {
            sum += src[i];
        }
        dst[i] = static_cast<Level>((2 * sum + m) / (2 * m));
    }
}

void flip(const Shape& shape, std::span<const Level> src, std::size_t dim, std::span<Level> dst) {
    const serial::FlipLayout fl = serial::flip_layout(shape, dim);
    if (src.size() < parallel_grain) {
        serial::flip(shape, src, dim, dst);
        return;
    }
    const bool last = dim + 1 == shape.size();
#pragma omp parallel for schedule(static)
    for (std::size_t row = 0; row < fl.rows; ++row) {
        serial::flip_one_row(fl, src, last, row, dst);
    }
}

OverlapCounts label_overlap(std::span<const Label> pred, std::span<const Label> truth, Label cls) {
    const std::size_t n = pred.size();
    if (n < parallel_grain) {
        return serial::label_overlap(pred, truth, cls);
    }
    std::uint64_t np = 0, nt = 0, nb = 0;
#pragma omp parallel for schedule(static) reduction(+ : np, nt, nb)
    for (std::size_t i = 0; i < n; ++i) {
        const bool p = pred[i] == cls;
        const bool t = truth[i] == cls;
        np += p;
        nt += t;
        nb += p && t;
    }
    return OverlapCounts{np, nt, nb};
}

#else

void apply_lut(std::span<const Level> src, std::span<const Level> lut, std::span<Level> dst) {
    serial::apply_lut(src, lut, dst);
}

void accumulate_histogram(std::span<const Level> data, std::span<std::uint64_t> counts) {
    serial::accumulate_histogram(data, counts);
}

void average_rounded(std::span<const Level* const> sources, std::span<Level> dst) {
    serial::average_rounded(sources, dst);
}

void flip(const Shape& shape, std::span<const Level> src, std::size_t dim, std::span<Level> dst) {
    serial::flip(shape, src, dim, dst);
}

OverlapCounts label_overlap(std::span<const Label> pred, std::span<const Label> truth, Label cls) {
    return serial::label_overlap(pred, truth, cls);
}

#endif  // _OPENMP

void copy_block_out(const Shape& src_shape, std::span<const Level> src,
                    const std::vector<std::size_t>& offset, const Shape& extent,
                    std::span<Level> dst) {
    const auto strides = row_major_strides(src_shape);
    const std::size_t row_len = extent.back();
    std::size_t base = 0;
    for (std::size_t d = 0; d < src_shape.size(); ++d) {
        base += offset[d] * strides[d];
    }
    if (src_shape.size() == 2) {
        for (std::size_t i = 0; i < extent[0]; ++i) {
            std::memcpy(dst.data() + i * row_len, src.data() + base + i * strides[0],
                        row_len * sizeof(Level));
        }
    } else {
        for (std::size_t i = 0; i < extent[0]; ++i) {
            for (std::size_t j = 0; j < extent[1]; ++j) {
                std::memcpy(dst.data() + (i * extent[1] + j) * row_len,
                            src.data() + base + i * strides[0] + j * strides[1],
                            row_len * sizeof(Level));
            }
        }
    }
}

void copy_block_in(const Shape& dst_shape, std::span<Level> dst,
                   const std::vector<std::size_t>& offset, const Shape& extent,
                   std::span<const Level> src) {
    const auto strides = row_major_strides(dst_shape);
    const std::size_t row_len = extent.back();
    std::size_t base = 0;
    for (std::size_t d = 0; d < dst_shape.size(); ++d) {
        base += offset[d] * strides[d];
    }
    if (dst_shape.size() == 2) {
        for (std::size_t i = 0; i < extent[0]; ++i) {
            std::memcpy(dst.data() + base + i * strides[0], src.data() + i * row_len,
                        row_len * sizeof(Level));
        }
    } else {
        for (std::size_t i = 0; i < extent[0]; ++i) {
            for (std::size_t j = 0; j < extent[1]; ++j) {
                std::memcpy(dst.data() + base + i * strides[0] + j * strides[1],
                            src.data() + (i * extent[1] + j) * row_len, row_len * sizeof(Level));
            }
        }
    }
}

}  // namespace csaug::kernels
