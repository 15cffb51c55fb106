#include "csaug/cutsplice.hpp"

#include <stdexcept>
#include <string>

#include "csaug/kernels.hpp"

namespace csaug {

CutPlan::CutPlan(Shape shape, std::vector<std::size_t> cuts_per_dim)
    : shape_(std::move(shape)), cuts_(std::move(cuts_per_dim)) {
    if (shape_.size() != 2 && shape_.size() != 3) {
        throw std::invalid_argument("cut plan shape must have 2 or 3 dimensions");
    }
    if (cuts_.size() != shape_.size()) {
        throw std::invalid_argument("cuts_per_dim length " + std::to_string(cuts_.size()) +
                                    " does not match rank " + std::to_string(shape_.size()));
    }
    comps_.resize(shape_.size());
    offsets_.resize(shape_.size());
    extents_.resize(shape_.size());
    slot_count_ = 1;
    for (std::size_t d = 0; d < shape_.size(); ++d) {
        const std::size_t m = cuts_[d] + 1;
        if (m > shape_[d]) {
            throw std::invalid_argument("dimension " + std::to_string(d) + ": " +
                                        std::to_string(m) + " components exceed extent " +
                                        std::to_string(shape_[d]));
        }
        comps_[d] = m;
        slot_count_ *= m;
        // First (E mod m) components take the ceiling extent, the rest the floor.
        const std::size_t base = shape_[d] / m;
        const std::size_t rem = shape_[d] % m;
        offsets_[d].resize(m);
        extents_[d].resize(m);
        std::size_t off = 0;
        for (std::size_t c = 0; c < m; ++c) {
            offsets_[d][c] = off;
            extents_[d][c] = base + (c < rem ? 1 : 0);
            off += extents_[d][c];
        }
    }
}

void CutPlan::check_slot(std::size_t slot) const {
    if (slot >= slot_count_) {
        throw std::out_of_range("slot " + std::to_string(slot) + " out of range [0, " +
                                std::to_string(slot_count_) + ")");
    }
}

std::vector<std::size_t> CutPlan::slot_coords(std::size_t slot) const {
    check_slot(slot);
    std::vector<std::size_t> coords(comps_.size());
    for (std::size_t d = comps_.size(); d-- > 0;) {
        coords[d] = slot % comps_[d];
        slot /= comps_[d];
    }
    return coords;
}

std::size_t CutPlan::slot_id(const std::vector<std::size_t>& coords) const {
    if (coords.size() != comps_.size()) {
        throw std::invalid_argument("slot coordinate rank mismatch");
    }
    std::size_t id = 0;
    for (std::size_t d = 0; d < comps_.size(); ++d) {
        if (coords[d] >= comps_[d]) {
            throw std::out_of_range("slot coordinate out of the component grid");
        }
        id = id * comps_[d] + coords[d];
    }
    return id;
}

std::vector<std::size_t> CutPlan::slot_offset(std::size_t slot) const {
    const auto coords = slot_coords(slot);
    std::vector<std::size_t> off(coords.size());
    for (std::size_t d = 0; d < coords.size(); ++d) {
        off[d] = offsets_[d][coords[d]];
    }
    return off;
}

Shape CutPlan::slot_extent(std::size_t slot) const {
    const auto coords = slot_coords(slot);
    Shape ext(coords.size());
    for (std::size_t d = 0; d < coords.size(); ++d) {
        ext[d] = extents_[d][coords[d]];
    }
    return ext;
}

namespace {

template <typename GridT, typename MakeFragment>
Component<GridT> extract_impl(const GridT& g, const CutPlan& plan, std::size_t slot,
                              MakeFragment make) {
    if (g.shape() != plan.shape()) {
        throw std::invalid_argument("grid shape does not match cut plan shape");
    }
    const auto offset = plan.slot_offset(slot);
    const Shape extent = plan.slot_extent(slot);
    std::vector<Level> out(shape_product(extent));
    kernels::copy_block_out(g.shape(), g.data(), offset, extent, out);
    return Component<GridT>{make(extent, std::move(out)), slot};
}

template <typename GridT, typename MakeGrid>
GridT splice_impl(const CutPlan& plan, std::span<const Component<GridT>> components,
                  MakeGrid make) {
    if (components.size() != plan.slot_count()) {
        throw std::invalid_argument("splice needs exactly " + std::to_string(plan.slot_count()) +
                                    " components, got " + std::to_string(components.size()));
    }
    std::vector<bool> seen(plan.slot_count(), false);
    std::vector<Level> out(shape_product(plan.shape()));
    std::span<Level> out_span(out);
    for (const Component<GridT>& c : components) {
        if (c.slot >= plan.slot_count() || seen[c.slot]) {
            throw std::invalid_argument("slot " + std::to_string(c.slot) +
                                        " is missing, duplicated, or out of range");
        }
        seen[c.slot] = true;
        const Shape extent = plan.slot_extent(c.slot);
        if (c.fragment.shape() != extent) {
            throw std::invalid_argument("fragment shape does not match extent of slot " +
                                        std::to_string(c.slot));
        }
        kernels::copy_block_in(plan.shape(), out_span, plan.slot_offset(c.slot), extent,
                               c.fragment.data());
    }
    return make(plan.shape(), std::move(out));
}

}  // namespace

Component<Volume> extract_component(const Volume& v, const CutPlan& plan, std::size_t slot) {
    return extract_impl(v, plan, slot, [&](Shape s, std::vector<Level> d) {
        return Volume(std::move(s), v.levels(), std::move(d));
    });
}

Component<LabelMask> extract_component(const LabelMask& m, const CutPlan& plan, std::size_t slot) {
    return extract_impl(m, plan, slot, [&](Shape s, std::vector<Label> d) {
        return LabelMask(std::move(s), m.classes(), std::move(d));
    });
}

Volume splice(const CutPlan& plan, std::span<const Component<Volume>> components) {
    const std::uint32_t levels = components.empty() ? 2 : components.front().fragment.levels();
    for (const auto& c : components) {
        if (c.fragment.levels() != levels) {
            throw std::invalid_argument("spliced fragments must share the level count");
        }
    }
    return splice_impl(plan, components, [&](Shape s, std::vector<Level> d) {
        return Volume(std::move(s), levels, std::move(d));
    });
}

LabelMask splice(const CutPlan& plan, std::span<const Component<LabelMask>> components) {
    const std::uint32_t classes = components.empty() ? 1 : components.front().fragment.classes();
    for (const auto& c : components) {
        if (c.fragment.classes() != classes) {
            throw std::invalid_argument("spliced fragments must share the class count");
        }
    }
    return splice_impl(plan, components, [&](Shape s, std::vector<Label> d) {
        return LabelMask(std::move(s), classes, std::move(d));
    });
}

std::size_t mirror_slot(const CutPlan& plan, std::size_t slot, std::size_t sym_dim) {
    if (sym_dim >= plan.rank()) {
        throw std::invalid_argument("symmetry dimension " + std::to_string(sym_dim) +
                                    " out of range for rank " + std::to_string(plan.rank()));
    }
    const std::size_t m = plan.components_per_dim()[sym_dim];
    if (plan.shape()[sym_dim] % m != 0) {
        throw std::invalid_argument(
            "plan is not symmetric along dimension " + std::to_string(sym_dim) + ": extent " +
            std::to_string(plan.shape()[sym_dim]) + " is not divisible by " + std::to_string(m));
    }
    auto coords = plan.slot_coords(slot);
    coords[sym_dim] = m - 1 - coords[sym_dim];
    return plan.slot_id(coords);
}

namespace {

template <typename GridT>
Component<GridT> resolve_impl(std::span<const GridT> grids, const CutPlan& plan, std::size_t slot,
                              const ComponentSource& source, std::optional<std::size_t> sym_dim) {
    if (source.image >= grids.size()) {
        throw std::out_of_range("source image " + std::to_string(source.image) +
                                " out of range for dataset of size " +
                                std::to_string(grids.size()));
    }
    if (!source.flipped) {
        return extract_component(grids[source.image], plan, slot);
    }
    if (!sym_dim.has_value()) {
        throw std::invalid_argument("flipped component requested without a symmetry dimension");
    }
    const std::size_t mirrored = mirror_slot(plan, slot, *sym_dim);
    Component<GridT> c = extract_component(grids[source.image], plan, mirrored);
    c.fragment = flip(c.fragment, *sym_dim);
    c.slot = slot;
    return c;
}

}  // namespace

Component<Volume> resolve_component(std::span<const Volume> images, const CutPlan& plan,
                                    std::size_t slot, const ComponentSource& source,
                                    std::optional<std::size_t> sym_dim) {
    return resolve_impl(images, plan, slot, source, sym_dim);
}

Component<LabelMask> resolve_component(std::span<const LabelMask> masks, const CutPlan& plan,
                                       std::size_t slot, const ComponentSource& source,
                                       std::optional<std::size_t> sym_dim) {
    return resolve_impl(masks, plan, slot, source, sym_dim);
}

}  // namespace csaug
