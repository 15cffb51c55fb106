#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "csaug/volume.hpp"

namespace csaug {

// Equal-partition component grid over a volume shape. Along dimension d,
// n_d cutting lines produce m_d = n_d + 1 components; when E_d is not
// divisible by m_d the first (E_d mod m_d) components are one voxel longer.
// Slots are numbered row-major over the component grid.
class CutPlan {
  public:
    CutPlan(Shape shape, std::vector<std::size_t> cuts_per_dim);

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    const std::vector<std::size_t>& cuts_per_dim() const { return cuts_; }
    const std::vector<std::size_t>& components_per_dim() const { return comps_; }
    std::size_t slot_count() const { return slot_count_; }

    std::vector<std::size_t> slot_coords(std::size_t slot) const;
    std::size_t slot_id(const std::vector<std::size_t>& coords) const;
    std::vector<std::size_t> slot_offset(std::size_t slot) const;
    Shape slot_extent(std::size_t slot) const;

    /// Offset of component c along dimension d.
    std::size_t offset(std::size_t dim, std::size_t c) const { return offsets_[dim][c]; }
    /// Extent of component c along dimension d.
    std::size_t extent(std::size_t dim, std::size_t c) const { return extents_[dim][c]; }

    bool operator==(const CutPlan& other) const = default;

  private:
    void check_slot(std::size_t slot) const;

    Shape shape_;
    std::vector<std::size_t> cuts_;
    std::vector<std::size_t> comps_;
    std::vector<std::vector<std::size_t>> offsets_;
    std::vector<std::vector<std::size_t>> extents_;
    std::size_t slot_count_ = 0;
};

inline CutPlan make_cut_plan(Shape shape, std::vector<std::size_t> cuts_per_dim) {
    return CutPlan(std::move(shape), std::move(cuts_per_dim));
}

/// One component: the fragment cut out of a grid plus the slot it came from.
template <typename GridT>
struct Component {
    GridT fragment;
    std::size_t slot = 0;
};

/// Identifies the image a slot is filled from and whether the component is the
/// flipped one from the mirrored slot.
struct ComponentSource {
    std::size_t image = 0;
    bool flipped = false;

    auto operator<=>(const ComponentSource&) const = default;
};

Component<Volume> extract_component(const Volume& v, const CutPlan& plan, std::size_t slot);
Component<LabelMask> extract_component(const LabelMask& m, const CutPlan& plan, std::size_t slot);

Volume splice(const CutPlan& plan, std::span<const Component<Volume>> components);
LabelMask splice(const CutPlan& plan, std::span<const Component<LabelMask>> components);

/// Mirrors a slot's coordinate along sym_dim. The plan must partition sym_dim
/// evenly, otherwise mirrored slots would differ in extent.
std::size_t mirror_slot(const CutPlan& plan, std::size_t slot, std::size_t sym_dim);

Component<Volume> resolve_component(std::span<const Volume> images, const CutPlan& plan,
                                    std::size_t slot, const ComponentSource& source,
                                    std::optional<std::size_t> sym_dim);
Component<LabelMask> resolve_component(std::span<const LabelMask> masks, const CutPlan& plan,
                                       std::size_t slot, const ComponentSource& source,
                                       std::optional<std::size_t> sym_dim);

}  // namespace csaug
