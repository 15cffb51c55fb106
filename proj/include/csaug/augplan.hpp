#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "csaug/cutsplice.hpp"
#include "csaug/volume.hpp"

namespace csaug {

using BigCount = boost::multiprecision::cpp_int;

enum class SpliceMode { normal, symmetric };

/// Exact size of the augmented dataset: N^k for normal splicing, (2N)^k for
/// symmetric splicing.
BigCount augmented_size(std::size_t dataset_size, std::size_t slot_count, SpliceMode mode);

/// Per-slot component sources, slot order row-major. Fully determines one
/// augmented image/mask pair.
using SpliceAssignment = std::vector<ComponentSource>;

// The whole combinatorial augmentation space as an index-addressable range.
// A linear index is read as k mixed-radix digits, most significant digit =
// slot 0; under symmetric splicing a digit d decodes to image d % N, flipped
// when d >= N. Addressing is limited to indices representable in 64 bits;
// total() itself is exact at any size.
class AugSpace {
  public:
    AugSpace(std::size_t dataset_size, CutPlan plan, SpliceMode mode,
             std::optional<std::size_t> sym_dim = std::nullopt);

    std::size_t dataset_size() const { return dataset_size_; }
    const CutPlan& plan() const { return plan_; }
    SpliceMode mode() const { return mode_; }
    std::optional<std::size_t> sym_dim() const { return sym_dim_; }
    std::size_t radix() const { return radix_; }
    std::size_t slot_count() const { return plan_.slot_count(); }
    const BigCount& total() const { return total_; }
    /// total() when it fits a 64-bit index, otherwise empty.
    std::optional<std::uint64_t> addressable_total() const;

  private:
    std::size_t dataset_size_;
    CutPlan plan_;
    SpliceMode mode_;
    std::optional<std::size_t> sym_dim_;
    std::size_t radix_;
    BigCount total_;
};

SpliceAssignment decode_index(const AugSpace& space, std::uint64_t index);

/// Inverse of decode_index. Only valid when the space is 64-bit addressable.
std::uint64_t encode_assignment(const AugSpace& space, const SpliceAssignment& assignment);

/// Index whose digits are all (image, unflipped); generates the original pair.
std::uint64_t identity_index(const AugSpace& space, std::size_t image);

bool is_identity_assignment(const SpliceAssignment& assignment);

struct DatasetView {
    std::span<const Volume> images;
    std::span<const LabelMask> masks;
};

struct GenerateOptions {
    /// Match the contributing images to their group average before splicing.
    bool second_pass = true;
};

/// Produces the augmented pair addressed by a linear index. Expects images to
/// be already normalized by the dataset-wide first pass. Deterministic:
/// identical inputs yield bit-identical outputs.
std::pair<Volume, LabelMask> generate(const DatasetView& dataset, const AugSpace& space,
                                      std::uint64_t index, const GenerateOptions& opts = {});

/// Seeded uniform draws over [0, total) with replacement (CounterRng stream).
std::vector<std::uint64_t> sample_indices(const AugSpace& space, std::size_t count,
                                          std::uint64_t seed, bool include_identity = true);

}  // namespace csaug
