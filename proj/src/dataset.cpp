#include "skinmap/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "skinmap/png_io.hpp"
#include "skinmap/random.hpp"

namespace skinmap {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

/// Sampling factor A with A A' = covariance, for PSD input.
Eigen::Matrix3d psd_factor(const Eigen::MatrixXd& covariance, const std::string& label) {
    if (covariance.rows() != 3 || covariance.cols() != 3)
        throw ContractViolation(label + ": covariance must be 3x3");
    if (!covariance.allFinite()) throw NumericDomainError(label + ": covariance has non-finite entries");
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw NumericDomainError(label + ": covariance is not symmetric");
    const Eigen::Matrix3d cov3 = covariance;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov3);
    const Eigen::Vector3d lambda = eig.eigenvalues();
    const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
    if (lambda.minCoeff() < -1e-9 * scale)
        throw NumericDomainError(label + ": covariance is not positive semi-definite");
    return eig.eigenvectors() * lambda.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

struct Sampler {
    std::vector<double> cumulative;
    std::vector<Eigen::Vector3d> means;
    std::vector<Eigen::Matrix3d> factors;

    Sampler(const std::vector<GaussianComponent<double>>& mixture, const std::string& name) {
        if (mixture.empty()) throw ContractViolation(name + " mixture has no components");
        double total = 0.0;
        for (std::size_t p = 0; p < mixture.size(); ++p) {
            const auto label = name + " component " + std::to_string(p);
            const auto& c = mixture[p];
            if (c.mean.size() != 3) throw ContractViolation(label + ": mean must have 3 entries");
            if (!(c.weight >= 0.0 && c.weight <= 1.0)) throw ContractViolation(label + ": weight outside [0,1]");
            total += c.weight;
            cumulative.push_back(total);
            means.emplace_back(c.mean);
            factors.push_back(psd_factor(c.covariance, label));
        }
        if (std::abs(total - 1.0) > 1e-9) throw ContractViolation(name + " weights must sum to 1");
    }

    Rgb8 draw(Rng& rng) const {
        const double u = rng.uniform01() * cumulative.back();
        std::size_t p = 0;
        while (p + 1 < cumulative.size() && u >= cumulative[p]) ++p;
        Eigen::Vector3d z;
        z << rng.normal(), rng.normal(), rng.normal();
        const Eigen::Vector3d x = means[p] + factors[p] * z;
        const auto channel = [](double v) {
            return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        };
        return {channel(x(0)), channel(x(1)), channel(x(2))};
    }
};

}  // namespace

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw MissingFileError(manifest.string());
    const auto base = manifest.parent_path();
    const auto resolve = [&base](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base / path;
    };

    std::vector<ManifestEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto comma = text.find(',');
        if (comma == std::string::npos)
            throw DataError(manifest.string() + ":" + std::to_string(line_no) + ": expected image_path,mask_path");
        const auto image = trim(text.substr(0, comma));
        const auto mask = trim(text.substr(comma + 1));
        if (image.empty() || mask.empty() || mask.find(',') != std::string::npos)
            throw DataError(manifest.string() + ":" + std::to_string(line_no) + ": expected image_path,mask_path");
        entries.push_back({resolve(image), resolve(mask)});
    }
    if (entries.empty()) throw DataError(manifest.string() + ": manifest lists no images");
    return entries;
}

LabeledImage load_labeled_image(const std::filesystem::path& image_path, const std::filesystem::path& mask_path) {
    LabeledImage out;
    out.image = read_png_rgb(image_path);
    out.mask = read_png_mask(mask_path);
    if (out.image.width != out.mask.width || out.image.height != out.mask.height)
        throw DimensionMismatchError("image " + image_path.string() + " and mask " + mask_path.string() +
                                     " differ in size");
    out.id = image_path.stem().string();
    return out;
}

std::vector<LabeledImage> load_manifest(const std::filesystem::path& manifest) {
    std::vector<LabeledImage> images;
    for (const auto& entry : read_manifest(manifest)) images.push_back(load_labeled_image(entry.image, entry.mask));
    return images;
}

TrainingSet sample_skin_pixels(std::span<const LabeledImage> images, std::size_t target, FeatureSpace fs,
                               std::uint64_t seed) {
    if (target < 1) throw ContractViolation("training pixel target must be >= 1");
    std::size_t available = 0;
    for (const auto& img : images) available += img.mask.skin_count();
    if (available == 0) throw EmptyTrainingSetError("no skin-labeled pixels in the training images");

    // Ranks into the pooled skin pixels (image order, then row-major).
    std::vector<std::size_t> ranks;
    if (target >= available) {
        ranks.resize(available);
        std::iota(ranks.begin(), ranks.end(), std::size_t{0});
    } else {
        Rng rng(seed);
        ranks = rng.sample_without_replacement(available, target);
    }

    std::vector<std::size_t> order(ranks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&ranks](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });

    std::vector<Rgb8> picked(ranks.size());
    std::size_t next = 0;
    std::size_t rank = 0;
    for (const auto& img : images) {
        for (std::size_t i = 0; i < img.mask.labels.size() && next < order.size(); ++i) {
            if (!img.mask.is_skin(i)) continue;
            while (next < order.size() && ranks[order[next]] == rank) picked[order[next++]] = img.image.pixels[i];
            ++rank;
        }
    }

    return {extract_features(picked, fs), fs, available};
}

namespace {

void check_shape(const SynthSpec& spec) {
    if (spec.width < 1 || spec.height < 1) throw ContractViolation("synthetic image shape must be positive");
    if (spec.skin_pixels > static_cast<std::size_t>(spec.width) * spec.height)
        throw ContractViolation("skin pixel count exceeds image size");
}

}  // namespace

void SynthSpec::validate() const {
    check_shape(*this);
    (void)Sampler(skin, "skin");
    (void)Sampler(background, "background");
}

LabeledImage synth_dataset(const SynthSpec& spec, std::uint64_t seed, std::string id) {
    check_shape(spec);
    const Sampler skin(spec.skin, "skin");
    const Sampler background(spec.background, "background");

    Rng rng(seed);
    LabeledImage out{ImageBuffer(spec.width, spec.height), MaskBuffer(spec.width, spec.height), std::move(id)};
    for (std::size_t i = 0; i < out.image.pixels.size(); ++i) {
        const bool is_skin = i < spec.skin_pixels;
        out.mask.labels[i] = is_skin ? 1 : 0;
        out.image.pixels[i] = (is_skin ? skin : background).draw(rng);
    }
    return out;
}

}  // namespace skinmap
