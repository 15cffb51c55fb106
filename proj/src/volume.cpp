#include "csaug/volume.hpp"

#include <stdexcept>
#include <string>

#include "csaug/kernels.hpp"

namespace csaug {

namespace {

void check_shape(const Shape& shape) {
    if (shape.size() != 2 && shape.size() != 3) {
        throw std::invalid_argument("shape must have 2 or 3 dimensions, got " +
                                    std::to_string(shape.size()));
    }
    for (std::size_t d = 0; d < shape.size(); ++d) {
        if (shape[d] == 0) {
            throw std::invalid_argument("extent of dimension " + std::to_string(d) + " is zero");
        }
    }
}

void check_dim(const Shape& shape, std::size_t dim) {
    if (dim >= shape.size()) {
        throw std::invalid_argument("dimension " + std::to_string(dim) +
                                    " out of range for rank " + std::to_string(shape.size()));
    }
}

constexpr std::uint32_t kMaxLevels = 65536;

}  // namespace

std::size_t shape_product(const Shape& shape) {
    std::size_t p = 1;
    for (const std::size_t e : shape) {
        p *= e;
    }
    return p;
}

std::vector<std::size_t> row_major_strides(const Shape& shape) {
    std::vector<std::size_t> strides(shape.size(), 1);
    for (std::size_t d = shape.size() - 1; d > 0; --d) {
        strides[d - 1] = strides[d] * shape[d];
    }
    return strides;
}

std::size_t linear_index(const Shape& shape, const std::vector<std::size_t>& coords) {
    std::size_t idx = 0;
    for (std::size_t d = 0; d < shape.size(); ++d) {
        idx = idx * shape[d] + coords[d];
    }
    return idx;
}

std::vector<std::size_t> coords_of(const Shape& shape, std::size_t linear) {
    std::vector<std::size_t> coords(shape.size());
    for (std::size_t d = shape.size(); d-- > 0;) {
        coords[d] = linear % shape[d];
        linear /= shape[d];
    }
    return coords;
}

Volume::Volume(Shape shape, std::uint32_t levels, std::vector<Level> data)
    : shape_(std::move(shape)), levels_(levels), data_(std::move(data)) {
    check_shape(shape_);
    if (levels_ < 2 || levels_ > kMaxLevels || (levels_ & (levels_ - 1)) != 0) {
        throw std::invalid_argument("levels must be a power of two in [2, 65536], got " +
                                    std::to_string(levels_));
    }
    if (data_.size() != shape_product(shape_)) {
        throw std::invalid_argument("data length " + std::to_string(data_.size()) +
                                    " does not match shape product " +
                                    std::to_string(shape_product(shape_)));
    }
    for (const Level v : data_) {
        if (v >= levels_) {
            throw std::invalid_argument("intensity " + std::to_string(v) + " out of range [0, " +
                                        std::to_string(levels_ - 1) + "]");
        }
    }
}

LabelMask::LabelMask(Shape shape, std::uint32_t classes, std::vector<Label> data)
    : shape_(std::move(shape)), classes_(classes), data_(std::move(data)) {
    check_shape(shape_);
    if (classes_ < 1 || classes_ > kMaxLevels) {
        throw std::invalid_argument("class count must be in [1, 65536], got " +
                                    std::to_string(classes_));
    }
    if (data_.size() != shape_product(shape_)) {
        throw std::invalid_argument("label data length " + std::to_string(data_.size()) +
                                    " does not match shape product " +
                                    std::to_string(shape_product(shape_)));
    }
    for (const Label v : data_) {
        if (v >= classes_) {
            throw std::invalid_argument("label " + std::to_string(v) + " out of range [0, " +
                                        std::to_string(classes_ - 1) + "]");
        }
    }
}

Volume flip(const Volume& v, std::size_t dim) {
    check_dim(v.shape(), dim);
    std::vector<Level> out(v.size());
    kernels::flip(v.shape(), v.data(), dim, out);
    return Volume(v.shape(), v.levels(), std::move(out));
}

LabelMask flip(const LabelMask& m, std::size_t dim) {
    check_dim(m.shape(), dim);
    std::vector<Label> out(m.size());
    kernels::flip(m.shape(), m.data(), dim, out);
    return LabelMask(m.shape(), m.classes(), std::move(out));
}

Volume average_image(std::span<const Volume> vs) {
    if (vs.empty()) {
        throw std::invalid_argument("average_image requires a non-empty input set");
    }
    const Volume& first = vs.front();
    std::vector<const Level*> sources;
    sources.reserve(vs.size());
    for (const Volume& v : vs) {
        if (v.shape() != first.shape() || v.levels() != first.levels()) {
            throw std::invalid_argument("average_image inputs must share shape and levels");
        }
        sources.push_back(v.data().data());
    }
    std::vector<Level> out(first.size());
    kernels::average_rounded(sources, out);
    return Volume(first.shape(), first.levels(), std::move(out));
}

Histogram histogram(const Volume& v) {
    Histogram h;
    h.levels = v.levels();
    h.counts.assign(h.levels, 0);
    kernels::accumulate_histogram(v.data(), h.counts);
    h.total = v.size();
    return h;
}

}  // namespace csaug
