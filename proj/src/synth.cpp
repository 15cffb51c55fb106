#include "csaug/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "csaug/rng.hpp"

namespace csaug {

namespace {

struct Ellipsoid {
    std::vector<double> center;
    std::vector<double> radius;
};

double quad_form(const Ellipsoid& e, const std::vector<std::size_t>& coords) {
    double q = 0.0;
    for (std::size_t d = 0; d < coords.size(); ++d) {
        const double t = (static_cast<double>(coords[d]) - e.center[d]) / e.radius[d];
        q += t * t;
    }
    return q;
}

double jitter(CounterRng& rng, double half_width) {
    return (rng.next_unit() * 2.0 - 1.0) * half_width;
}

}  // namespace

SynthDataset synth_dataset(const SynthConfig& config) {
    if (config.shape.size() != 2 && config.shape.size() != 3) {
        throw std::invalid_argument("synthetic shapes must have 2 or 3 dimensions");
    }
    for (const std::size_t e : config.shape) {
        if (e < 2) {
            throw std::invalid_argument("synthetic extents must be at least 2");
        }
    }
    if (config.classes < 2) {
        throw std::invalid_argument("synthetic masks need at least 2 classes");
    }
    const bool sym = config.kind == SynthKind::sym;
    if (sym && config.sym_dim >= config.shape.size()) {
        throw std::invalid_argument("sym_dim out of range for the synthetic shape");
    }

    const std::size_t rank = config.shape.size();
    const std::size_t voxels = shape_product(config.shape);
    const double top = static_cast<double>(config.levels - 1);
    // Gradient runs along a non-mirrored dimension so sym stays exact.
    std::size_t grad_dim = rank - 1;
    if (sym && grad_dim == config.sym_dim) {
        grad_dim = rank - 2;
    }

    SynthDataset ds;
    if (sym) {
        ds.sym_dim = config.sym_dim;
    }
    for (std::size_t j = 0; j < config.count; ++j) {
        CounterRng rng(CounterRng::mix(config.seed) + j + 1);

        Ellipsoid blob;
        blob.center.resize(rank);
        blob.radius.resize(rank);
        for (std::size_t d = 0; d < rank; ++d) {
            const double extent = static_cast<double>(config.shape[d]);
            if (sym && d == config.sym_dim) {
                // Center in one half; mirroring produces the bilateral pair.
                blob.center[d] = extent / 4.0 + jitter(rng, extent / 16.0);
            } else {
                blob.center[d] = extent / 2.0 + jitter(rng, extent / 8.0);
            }
            blob.radius[d] = std::max(1.5, extent / 4.0 * (1.0 + jitter(rng, 0.25)));
        }
        const double base = top * (0.10 + 0.05 * rng.next_unit());
        const double amplitude = top * (0.55 + 0.15 * rng.next_unit());
        const double grad_span = top * 0.08;

        std::vector<Level> img(voxels);
        std::vector<Label> msk(voxels);
        std::vector<std::size_t> coords(rank, 0);
        for (std::size_t i = 0; i < voxels; ++i) {
            std::vector<std::size_t> eval = coords;
            if (sym) {
                const std::size_t c = eval[config.sym_dim];
                const std::size_t e = config.shape[config.sym_dim];
                eval[config.sym_dim] = std::min(c, e - 1 - c);
            }
            const double q = quad_form(blob, eval);
            const double grad = grad_span * static_cast<double>(eval[grad_dim]) /
                                static_cast<double>(config.shape[grad_dim]);
            const double value = base + grad + amplitude * std::exp(-2.0 * q);
            img[i] = static_cast<Level>(std::clamp(std::floor(value + 0.5), 0.0, top));
            msk[i] = q <= 1.0 ? 1 : 0;

            for (std::size_t d = rank; d-- > 0;) {
                if (++coords[d] < config.shape[d]) {
                    break;
                }
                coords[d] = 0;
            }
        }
        ds.images.emplace_back(config.shape, config.levels, std::move(img));
        ds.masks.emplace_back(config.shape, config.classes, std::move(msk));
    }
    return ds;
}

}  // namespace csaug
