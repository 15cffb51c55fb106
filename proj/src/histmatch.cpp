#include "csaug/histmatch.hpp"

#include <algorithm>
#include <stdexcept>

#include "csaug/kernels.hpp"

namespace csaug {

namespace {

std::vector<std::uint64_t> cumulative(const Histogram& h) {
    std::vector<std::uint64_t> cum(h.levels);
    std::uint64_t running = 0;
    for (std::uint32_t k = 0; k < h.levels; ++k) {
        running += h.counts[k];
        cum[k] = running;
    }
    return cum;
}

void check_nonempty(const Histogram& h) {
    if (h.total == 0) {
        throw std::invalid_argument("histogram is empty");
    }
}

}  // namespace

ScaledCdf scaled_cdf(const Histogram& h) {
    check_nonempty(h);
    ScaledCdf cdf;
    cdf.levels = h.levels;
    cdf.values.resize(h.levels);
    const auto cum = cumulative(h);
    // Multiply before dividing: (L-1)*cum is integer-exact in a double, so the
    // final value is exactly L-1.
    for (std::uint32_t k = 0; k < h.levels; ++k) {
        cdf.values[k] = static_cast<double>((h.levels - 1) * cum[k]) /
                        static_cast<double>(h.total);
    }
    return cdf;
}

LevelMap build_level_map(const Histogram& source, const Histogram& reference) {
    if (source.levels != reference.levels) {
        throw std::invalid_argument("level-count mismatch between source and reference");
    }
    check_nonempty(source);
    check_nonempty(reference);

    const auto cum_src = cumulative(source);
    const auto cum_ref = cumulative(reference);

    LevelMap lm;
    lm.levels = source.levels;
    lm.map.resize(source.levels);

    // Both sides scan monotonically, so one pass suffices. G(L-1) = L-1 >= T(r)
    // guarantees z always exists.
    std::uint32_t z = 0;
    for (std::uint32_t r = 0; r < source.levels; ++r) {
        const auto lhs = [&](std::uint32_t zz) {
            return static_cast<unsigned __int128>(cum_ref[zz]) * source.total;
        };
        const unsigned __int128 rhs = static_cast<unsigned __int128>(cum_src[r]) * reference.total;
        while (lhs(z) < rhs) {
            ++z;
        }
        lm.map[r] = static_cast<Level>(z);
    }
    return lm;
}

Volume apply_level_map(const Volume& v, const LevelMap& m) {
    if (v.levels() != m.levels) {
        throw std::invalid_argument("level-count mismatch between volume and level map");
    }
    std::vector<Level> out(v.size());
    kernels::apply_lut(v.data(), m.map, out);
    return Volume(v.shape(), v.levels(), std::move(out));
}

Volume match_to_reference(const Volume& v, const Volume& ref) {
    return apply_level_map(v, build_level_map(histogram(v), histogram(ref)));
}

std::vector<Volume> normalize_dataset(std::span<const Volume> vs) {
    const Volume avg = average_image(vs);
    std::vector<Volume> out;
    out.reserve(vs.size());
    for (const Volume& v : vs) {
        out.push_back(match_to_reference(v, avg));
    }
    return out;
}

std::vector<Volume> match_group(std::span<const Volume> vs) {
    if (vs.empty()) {
        throw std::invalid_argument("match_group requires a non-empty group");
    }
    // Distinct-by-value set of contributors, first-occurrence order.
    std::vector<const Volume*> distinct;
    std::vector<std::size_t> rep;  // input position -> index into distinct
    rep.reserve(vs.size());
    for (const Volume& v : vs) {
        std::size_t found = distinct.size();
        for (std::size_t j = 0; j < distinct.size(); ++j) {
            if (*distinct[j] == v) {
                found = j;
                break;
            }
        }
        if (found == distinct.size()) {
            distinct.push_back(&v);
        }
        rep.push_back(found);
    }

    std::vector<Volume> matched;
    if (distinct.size() == 1) {
        // Singleton group: self-matching is the identity on present levels.
        matched.push_back(*distinct[0]);
    } else {
        std::vector<Volume> members;
        members.reserve(distinct.size());
        for (const Volume* p : distinct) {
            members.push_back(*p);
        }
        const Volume avg = average_image(members);
        matched.reserve(distinct.size());
        for (const Volume* p : distinct) {
            matched.push_back(match_to_reference(*p, avg));
        }
    }

    std::vector<Volume> out;
    out.reserve(vs.size());
    for (const std::size_t j : rep) {
        out.push_back(matched[j]);
    }
    return out;
}

}  // namespace csaug
