#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace csaug {

/// Intensity level of a single voxel. Levels live in [0, L-1] with L <= 65536.
using Level = std::uint16_t;
/// Class label of a single voxel. 0 is background.
using Label = std::uint16_t;
/// Per-dimension extents, row-major order (last dimension contiguous).
using Shape = std::vector<std::size_t>;

std::size_t shape_product(const Shape& shape);
std::vector<std::size_t> row_major_strides(const Shape& shape);
std::size_t linear_index(const Shape& shape, const std::vector<std::size_t>& coords);
std::vector<std::size_t> coords_of(const Shape& shape, std::size_t linear);

/// 2D/3D grid of discrete intensity levels. Immutable after construction.
class Volume {
  public:
    Volume(Shape shape, std::uint32_t levels, std::vector<Level> data);

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t extent(std::size_t dim) const { return shape_[dim]; }
    std::uint32_t levels() const { return levels_; }
    std::size_t size() const { return data_.size(); }
    std::span<const Level> data() const { return data_; }
    Level operator[](std::size_t i) const { return data_[i]; }

    bool operator==(const Volume& other) const = default;

  private:
    Shape shape_;
    std::uint32_t levels_;
    std::vector<Level> data_;
};

/// Segmentation mask paired with a Volume: same shape, labels in [0, classes).
class LabelMask {
  public:
    LabelMask(Shape shape, std::uint32_t classes, std::vector<Label> data);

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t extent(std::size_t dim) const { return shape_[dim]; }
    std::uint32_t classes() const { return classes_; }
    std::size_t size() const { return data_.size(); }
    std::span<const Label> data() const { return data_; }
    Label operator[](std::size_t i) const { return data_[i]; }

    bool operator==(const LabelMask& other) const = default;

  private:
    Shape shape_;
    std::uint32_t classes_;
    std::vector<Label> data_;
};

/// Per-level voxel counts of one volume.
struct Histogram {
    std::uint32_t levels = 0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
};

/// Reverses one dimension: output (i0,..,id,..) reads input (i0,.., E_d-1-id, ..).
Volume flip(const Volume& v, std::size_t dim);
LabelMask flip(const LabelMask& m, std::size_t dim);

/// Per-position arithmetic mean, rounded half away from zero.
Volume average_image(std::span<const Volume> vs);

Histogram histogram(const Volume& v);

}  // namespace csaug
