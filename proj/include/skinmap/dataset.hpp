#ifndef SKINMAP_DATASET_HPP
#define SKINMAP_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "skinmap/colorspace.hpp"
#include "skinmap/gmm.hpp"
#include "skinmap/image.hpp"

namespace skinmap {

struct LabeledImage {
    ImageBuffer image;
    MaskBuffer mask;
    std::string id;
};

struct TrainingSet {
    Eigen::MatrixXd features;  // one row per sampled skin pixel
    FeatureSpace space;
    std::size_t source_count = 0;  // skin pixels available before sampling
};

struct ManifestEntry {
    std::filesystem::path image;
    std::filesystem::path mask;
};

/**
 * Reads `image_path,mask_path` lines. Blank lines and lines starting with
 * '#' are skipped; relative paths resolve against the manifest's directory.
 */
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);

/// Loads an image and its mask; mask label is true iff the mask pixel is nonzero.
LabeledImage load_labeled_image(const std::filesystem::path& image_path, const std::filesystem::path& mask_path);

std::vector<LabeledImage> load_manifest(const std::filesystem::path& manifest);

/**
 * Uniformly samples `target` skin pixels without replacement from the pooled
 * skin-labeled pixels of `images`. When fewer exist, every skin pixel is
 * taken. Output order is draw order.
 */
TrainingSet sample_skin_pixels(std::span<const LabeledImage> images, std::size_t target, FeatureSpace fs,
                               std::uint64_t seed);

/// Parameters for one synthetic labeled image. Mixtures are over 0..255 RGB;
/// covariances need only be positive semi-definite.
struct SynthSpec {
    int width = 64;
    int height = 64;
    std::size_t skin_pixels = 2048;
    std::vector<GaussianComponent<double>> skin;
    std::vector<GaussianComponent<double>> background;

    /// Throws ContractViolation on bad shape or weights, NumericDomainError on
    /// an invalid covariance.
    void validate() const;
};

/**
 * Draws skin colors from `spec.skin` and the rest from `spec.background`,
 * rounded and clamped to 0..255. Skin occupies the first `skin_pixels`
 * positions in row-major order.
 */
LabeledImage synth_dataset(const SynthSpec& spec, std::uint64_t seed, std::string id = "synth");

}  // namespace skinmap

#endif  // SKINMAP_DATASET_HPP
