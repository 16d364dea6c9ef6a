#ifndef SKINMAP_SEEDING_HPP
#define SKINMAP_SEEDING_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "skinmap/random.hpp"

namespace skinmap {

/**
 * Picks `count` row indices of `samples` in seeded random order, skipping rows
 * whose value equals an already-picked row. Falls back to repeated values only
 * when the data holds fewer than `count` distinct rows.
 */
template <typename Derived>
std::vector<Eigen::Index> pick_seed_rows(const Eigen::MatrixBase<Derived>& samples, Eigen::Index count,
                                         Rng& rng) {
    const auto n = static_cast<std::size_t>(samples.rows());
    const auto order = rng.sample_without_replacement(n, n);

    std::vector<Eigen::Index> picked;
    std::vector<Eigen::Index> repeats;
    for (std::size_t idx : order) {
        if (static_cast<Eigen::Index>(picked.size()) == count) break;
        const auto row = static_cast<Eigen::Index>(idx);
        bool duplicate = false;
        for (Eigen::Index prior : picked) {
            if (samples.row(prior) == samples.row(row)) {
                duplicate = true;
                break;
            }
        }
        (duplicate ? repeats : picked).push_back(row);
    }
    for (std::size_t i = 0; static_cast<Eigen::Index>(picked.size()) < count && i < repeats.size(); ++i)
        picked.push_back(repeats[i]);
    return picked;
}

}  // namespace skinmap

#endif  // SKINMAP_SEEDING_HPP
