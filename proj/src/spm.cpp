#include "skinmap/spm.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace skinmap {

SkinProbabilityMap spm_from_log_densities(int width, int height, std::span<const double> log_densities) {
    if (log_densities.size() != static_cast<std::size_t>(width) * height)
        throw ContractViolation("density count does not match SPM shape");
    SkinProbabilityMap spm{width, height, std::vector<double>(log_densities.size(), 0.5)};
    if (log_densities.empty()) return spm;

    const auto [lo_it, hi_it] = std::minmax_element(log_densities.begin(), log_densities.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (lo == hi) return spm;

    // exp(l - hi) is in (0, 1], so nothing overflows.
    const double floor = std::exp(lo - hi);
    const double span = 1.0 - floor;
    for (std::size_t i = 0; i < log_densities.size(); ++i) {
        const double v = (std::exp(log_densities[i] - hi) - floor) / span;
        spm.values[i] = std::clamp(v, 0.0, 1.0);
    }
    return spm;
}

SkinProbabilityMap compute_spm(const ImageBuffer& image, const GaussianMixtured& gmm, FeatureSpace fs) {
    if (gmm.dim() != fs.dim())
        throw ContractViolation("model dimension " + std::to_string(gmm.dim()) + " does not match feature space " +
                                to_string(fs));

    // Photos repeat colors heavily; evaluate each distinct color once.
    std::unordered_map<std::uint32_t, std::size_t> slot_of;
    std::vector<Rgb8> distinct;
    std::vector<std::size_t> slots(image.pixels.size());
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        const auto& p = image.pixels[i];
        const std::uint32_t key = (std::uint32_t{p.r} << 16) | (std::uint32_t{p.g} << 8) | p.b;
        const auto [it, inserted] = slot_of.try_emplace(key, distinct.size());
        if (inserted) distinct.push_back(p);
        slots[i] = it->second;
    }

    const Eigen::VectorXd distinct_log = gmm.log_pdf_rows(extract_features(distinct, fs));
    std::vector<double> log_densities(image.pixels.size());
    for (std::size_t i = 0; i < slots.size(); ++i) log_densities[i] = distinct_log(static_cast<Eigen::Index>(slots[i]));
    return spm_from_log_densities(image.width, image.height, log_densities);
}

GrayImage spm_to_gray8(const SkinProbabilityMap& spm) {
    GrayImage out{spm.width, spm.height, {}};
    out.values.reserve(spm.values.size());
    for (double p : spm.values)
        out.values.push_back(static_cast<std::uint8_t>(std::clamp(std::floor(255.0 * p + 0.5), 0.0, 255.0)));
    return out;
}

}  // namespace skinmap
