#include "csaug/augplan.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "csaug/histmatch.hpp"
#include "csaug/kernels.hpp"
#include "csaug/rng.hpp"

namespace csaug {

BigCount augmented_size(std::size_t dataset_size, std::size_t slot_count, SpliceMode mode) {
    if (dataset_size < 1 || slot_count < 1) {
        throw std::invalid_argument("augmented_size requires N >= 1 and k >= 1");
    }
    const BigCount radix =
        mode == SpliceMode::normal ? BigCount(dataset_size) : BigCount(2) * dataset_size;
    return boost::multiprecision::pow(radix, static_cast<unsigned>(slot_count));
}

AugSpace::AugSpace(std::size_t dataset_size, CutPlan plan, SpliceMode mode,
                   std::optional<std::size_t> sym_dim)
    : dataset_size_(dataset_size), plan_(std::move(plan)), mode_(mode), sym_dim_(sym_dim) {
    if (dataset_size_ < 1) {
        throw std::invalid_argument("augmentation space requires a non-empty dataset");
    }
    if (mode_ == SpliceMode::symmetric) {
        if (!sym_dim_.has_value()) {
            throw std::invalid_argument("symmetric splicing requires a symmetry dimension");
        }
        // Fails if the plan does not partition sym_dim evenly.
        mirror_slot(plan_, 0, *sym_dim_);
        radix_ = 2 * dataset_size_;
    } else {
        sym_dim_.reset();
        radix_ = dataset_size_;
    }
    total_ = augmented_size(dataset_size_, plan_.slot_count(), mode_);
}

std::optional<std::uint64_t> AugSpace::addressable_total() const {
    if (total_ > BigCount(UINT64_MAX)) {
        return std::nullopt;
    }
    return total_.convert_to<std::uint64_t>();
}

SpliceAssignment decode_index(const AugSpace& space, std::uint64_t index) {
    if (BigCount(index) >= space.total()) {
        throw std::out_of_range("index " + std::to_string(index) +
                                " out of range for augmentation space of size " +
                                space.total().str());
    }
    const std::size_t k = space.slot_count();
    const std::uint64_t radix = space.radix();
    const std::uint64_t n = space.dataset_size();
    SpliceAssignment assignment(k);
    for (std::size_t s = k; s-- > 0;) {
        const std::uint64_t digit = index % radix;
        index /= radix;
        assignment[s] = ComponentSource{static_cast<std::size_t>(digit % n), digit >= n};
    }
    return assignment;
}

std::uint64_t encode_assignment(const AugSpace& space, const SpliceAssignment& assignment) {
    if (assignment.size() != space.slot_count()) {
        throw std::invalid_argument("assignment length does not match slot count");
    }
    if (!space.addressable_total().has_value()) {
        throw std::out_of_range("augmentation space exceeds 64-bit addressing");
    }
    std::uint64_t index = 0;
    for (const ComponentSource& src : assignment) {
        if (src.image >= space.dataset_size()) {
            throw std::out_of_range("assignment references image beyond the dataset");
        }
        if (src.flipped && space.mode() != SpliceMode::symmetric) {
            throw std::invalid_argument("flipped source in a normal-splicing space");
        }
        const std::uint64_t digit = src.image + (src.flipped ? space.dataset_size() : 0);
        index = index * space.radix() + digit;
    }
    return index;
}

std::uint64_t identity_index(const AugSpace& space, std::size_t image) {
    if (image >= space.dataset_size()) {
        throw std::out_of_range("image id beyond the dataset");
    }
    SpliceAssignment assignment(space.slot_count(), ComponentSource{image, false});
    return encode_assignment(space, assignment);
}

bool is_identity_assignment(const SpliceAssignment& assignment) {
    for (const ComponentSource& src : assignment) {
        if (src.flipped || src.image != assignment.front().image) {
            return false;
        }
    }
    return true;
}

std::pair<Volume, LabelMask> generate(const DatasetView& dataset, const AugSpace& space,
                                      std::uint64_t index, const GenerateOptions& opts) {
    if (dataset.images.size() != space.dataset_size() ||
        dataset.masks.size() != space.dataset_size()) {
        throw std::invalid_argument("dataset size does not match the augmentation space");
    }
    const SpliceAssignment assignment = decode_index(space, index);
    const std::size_t k = space.slot_count();

    // Contributing images, each matched to the group average (second pass).
    // Matching commutes with extraction and flipping, so the level map is
    // applied per fragment instead of to whole images.
    std::vector<std::size_t> ids;
    for (const ComponentSource& src : assignment) {
        ids.push_back(src.image);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::vector<const LevelMap*> lut_of(space.dataset_size(), nullptr);
    std::vector<LevelMap> luts;
    if (opts.second_pass && ids.size() > 1) {
        // Distinct by value: equal-content contributors share one average slot.
        std::vector<const Volume*> reps;
        std::vector<std::size_t> rep_of(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const Volume& v = dataset.images[ids[i]];
            std::size_t found = reps.size();
            for (std::size_t j = 0; j < reps.size(); ++j) {
                if (*reps[j] == v) {
                    found = j;
                    break;
                }
            }
            if (found == reps.size()) {
                reps.push_back(&v);
            }
            rep_of[i] = found;
        }
        if (reps.size() > 1) {
            std::vector<Volume> members;
            members.reserve(reps.size());
            for (const Volume* p : reps) {
                members.push_back(*p);
            }
            const Volume avg = average_image(members);
            const Histogram avg_hist = histogram(avg);
            luts.reserve(reps.size());
            for (const Volume* p : reps) {
                luts.push_back(build_level_map(histogram(*p), avg_hist));
            }
            for (std::size_t i = 0; i < ids.size(); ++i) {
                lut_of[ids[i]] = &luts[rep_of[i]];
            }
        }
    }

    std::vector<Component<Volume>> image_parts;
    std::vector<Component<LabelMask>> mask_parts;
    image_parts.reserve(k);
    mask_parts.reserve(k);
    for (std::size_t s = 0; s < k; ++s) {
        const ComponentSource& src = assignment[s];
        const std::size_t from_slot =
            src.flipped ? mirror_slot(space.plan(), s, *space.sym_dim()) : s;
        Component<Volume> part = extract_component(dataset.images[src.image], space.plan(), from_slot);
        part.slot = s;
        if (const LevelMap* lut = lut_of[src.image]) {
            part.fragment = apply_level_map(part.fragment, *lut);
        }
        if (src.flipped) {
            part.fragment = flip(part.fragment, *space.sym_dim());
        }
        image_parts.push_back(std::move(part));

        Component<LabelMask> mask_part =
            extract_component(dataset.masks[src.image], space.plan(), from_slot);
        mask_part.slot = s;
        if (src.flipped) {
            mask_part.fragment = flip(mask_part.fragment, *space.sym_dim());
        }
        mask_parts.push_back(std::move(mask_part));
    }

    return {splice(space.plan(), image_parts), splice(space.plan(), mask_parts)};
}

std::vector<std::uint64_t> sample_indices(const AugSpace& space, std::size_t count,
                                          std::uint64_t seed, bool include_identity) {
    const auto total = space.addressable_total();
    if (!total.has_value()) {
        throw std::out_of_range("augmentation space of size " + space.total().str() +
                                " exceeds 64-bit addressing; sampling is unavailable");
    }
    if (!include_identity && BigCount(space.dataset_size()) == space.total()) {
        throw std::invalid_argument("every index is an identity index; nothing to sample");
    }
    CounterRng rng(seed);
    std::vector<std::uint64_t> indices;
    indices.reserve(count);
    while (indices.size() < count) {
        const std::uint64_t index = rng.next_below(*total);
        if (!include_identity && is_identity_assignment(decode_index(space, index))) {
            continue;
        }
        indices.push_back(index);
    }
    return indices;
}

}  // namespace csaug
