#ifndef SKINMAP_ROC_HPP
#define SKINMAP_ROC_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skinmap/image.hpp"
#include "skinmap/spm.hpp"

namespace skinmap {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t s = 0;   // skin pixels
    std::uint64_t ns = 0;  // non-skin pixels

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Rates {
    double tpr = 0.0;
    double fpr = 0.0;
};

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // thresholds strictly increasing
    double auc = 0.0;
};

/// Sweep grid t_k = k / kThresholdDenominator for k = 1 .. kThresholdDenominator - 1.
inline constexpr int kThresholdDenominator = 1000;
inline constexpr int kThresholdCount = kThresholdDenominator - 1;

inline double sweep_threshold(int k) noexcept { return static_cast<double>(k) / kThresholdDenominator; }

/// A pixel is positive iff its SPM value is >= t.
ConfusionCounts confusion_at(const SkinProbabilityMap& spm, const MaskBuffer& mask, double t);

/// (TP/S, FP/NS). Throws DegenerateMaskError when S or NS is zero.
Rates rates(const ConfusionCounts& counts);

/// Confusion counts at every sweep threshold; entry k-1 holds threshold k.
std::vector<ConfusionCounts> sweep_counts(const SkinProbabilityMap& spm, const MaskBuffer& mask);

RocCurve roc_sweep(const SkinProbabilityMap& spm, const MaskBuffer& mask);

/**
 * Trapezoidal area under TPR over FPR. Points are sorted by ascending FPR
 * (ties by ascending TPR) and (0,0), (1,1) are added when missing.
 */
double auc(std::span<const RocPoint> points);

/// Micro-averaged curve: counts are pooled across images before rates are taken.
RocCurve aggregate_roc(std::span<const SkinProbabilityMap> spms, std::span<const MaskBuffer> masks);

/// `threshold,fpr,tpr` rows in 6-decimal fixed point, then `# auc=<value>`.
std::string roc_to_csv(const RocCurve& curve);

}  // namespace skinmap

#endif  // SKINMAP_ROC_HPP
