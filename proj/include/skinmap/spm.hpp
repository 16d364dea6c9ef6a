#ifndef SKINMAP_SPM_HPP
#define SKINMAP_SPM_HPP

#include <span>
#include <vector>

#include "skinmap/colorspace.hpp"
#include "skinmap/gmm.hpp"
#include "skinmap/image.hpp"

namespace skinmap {

/// Per-pixel skin likelihood, min-max normalized to [0,1] within one image.
struct SkinProbabilityMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

/**
 * Min-max normalizes per-pixel log densities in linear space:
 * v' = (v - min) / (max - min). A constant image maps to 0.5 everywhere.
 */
SkinProbabilityMap spm_from_log_densities(int width, int height, std::span<const double> log_densities);

/// Evaluates the mixture density on every pixel's features and normalizes.
/// Throws ContractViolation when gmm.dim() != fs.dim().
SkinProbabilityMap compute_spm(const ImageBuffer& image, const GaussianMixtured& gmm, FeatureSpace fs);

/// round(255 p), halves rounded up.
GrayImage spm_to_gray8(const SkinProbabilityMap& spm);

}  // namespace skinmap

#endif  // SKINMAP_SPM_HPP
