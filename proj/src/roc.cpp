#include "skinmap/roc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace skinmap {

namespace {

void check_shape(const SkinProbabilityMap& spm, const MaskBuffer& mask) {
    if (spm.width != mask.width || spm.height != mask.height || spm.values.size() != mask.labels.size())
        throw ContractViolation("SPM and mask dimensions differ");
}

/// Number of sweep thresholds that `v` meets under the >= rule.
int thresholds_passed(double v) {
    if (!(v >= sweep_threshold(1))) return 0;
    int k = static_cast<int>(std::clamp(std::floor(v * kThresholdDenominator), 0.0, double(kThresholdCount)));
    while (k < kThresholdCount && v >= sweep_threshold(k + 1)) ++k;
    while (k > 0 && v < sweep_threshold(k)) --k;
    return k;
}

RocCurve curve_from_counts(const std::vector<ConfusionCounts>& counts) {
    RocCurve curve;
    curve.points.reserve(counts.size());
    for (int k = 1; k <= kThresholdCount; ++k) {
        const auto r = rates(counts[static_cast<std::size_t>(k - 1)]);
        curve.points.push_back({sweep_threshold(k), r.fpr, r.tpr});
    }
    curve.auc = auc(curve.points);
    return curve;
}

}  // namespace

ConfusionCounts confusion_at(const SkinProbabilityMap& spm, const MaskBuffer& mask, double t) {
    check_shape(spm, mask);
    ConfusionCounts c;
    for (std::size_t i = 0; i < spm.values.size(); ++i) {
        const bool skin = mask.is_skin(i);
        const bool positive = spm.values[i] >= t;
        (skin ? c.s : c.ns) += 1;
        if (positive) (skin ? c.tp : c.fp) += 1;
    }
    return c;
}

Rates rates(const ConfusionCounts& counts) {
    if (counts.s == 0 || counts.ns == 0)
        throw DegenerateMaskError("ground truth must contain both skin and non-skin pixels");
    return {static_cast<double>(counts.tp) / static_cast<double>(counts.s),
            static_cast<double>(counts.fp) / static_cast<double>(counts.ns)};
}

std::vector<ConfusionCounts> sweep_counts(const SkinProbabilityMap& spm, const MaskBuffer& mask) {
    check_shape(spm, mask);
    std::vector<std::uint64_t> skin_hist(kThresholdCount + 1, 0);
    std::vector<std::uint64_t> other_hist(kThresholdCount + 1, 0);
    std::uint64_t s = 0;
    std::uint64_t ns = 0;
    for (std::size_t i = 0; i < spm.values.size(); ++i) {
        const auto k = static_cast<std::size_t>(thresholds_passed(spm.values[i]));
        if (mask.is_skin(i)) {
            ++skin_hist[k];
            ++s;
        } else {
            ++other_hist[k];
            ++ns;
        }
    }

    std::vector<ConfusionCounts> out(kThresholdCount);
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    for (int k = kThresholdCount; k >= 1; --k) {
        tp += skin_hist[static_cast<std::size_t>(k)];
        fp += other_hist[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(k - 1)] = {tp, fp, s, ns};
    }
    return out;
}

RocCurve roc_sweep(const SkinProbabilityMap& spm, const MaskBuffer& mask) {
    return curve_from_counts(sweep_counts(spm, mask));
}

double auc(std::span<const RocPoint> points) {
    std::vector<std::pair<double, double>> xy;
    xy.reserve(points.size() + 2);
    for (const auto& p : points) xy.emplace_back(p.fpr, p.tpr);
    const auto has = [&xy](double x, double y) {
        return std::find(xy.begin(), xy.end(), std::pair{x, y}) != xy.end();
    };
    if (!has(0.0, 0.0)) xy.emplace_back(0.0, 0.0);
    if (!has(1.0, 1.0)) xy.emplace_back(1.0, 1.0);
    std::sort(xy.begin(), xy.end());

    double area = 0.0;
    for (std::size_t i = 1; i < xy.size(); ++i)
        area += (xy[i].first - xy[i - 1].first) * (xy[i].second + xy[i - 1].second) * 0.5;
    return std::clamp(area, 0.0, 1.0);
}

RocCurve aggregate_roc(std::span<const SkinProbabilityMap> spms, std::span<const MaskBuffer> masks) {
    if (spms.size() != masks.size()) throw ContractViolation("SPM and mask lists differ in length");
    if (spms.empty()) throw DegenerateMaskError("no images to evaluate");
    std::vector<ConfusionCounts> pooled(kThresholdCount);
    for (std::size_t i = 0; i < spms.size(); ++i) {
        const auto counts = sweep_counts(spms[i], masks[i]);
        for (std::size_t k = 0; k < pooled.size(); ++k) {
            pooled[k].tp += counts[k].tp;
            pooled[k].fp += counts[k].fp;
            pooled[k].s += counts[k].s;
            pooled[k].ns += counts[k].ns;
        }
    }
    return curve_from_counts(pooled);
}

std::string roc_to_csv(const RocCurve& curve) {
    std::string out = "threshold,fpr,tpr\n";
    char line[96];
    for (const auto& p : curve.points) {
        std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f\n", p.threshold, p.fpr, p.tpr);
        out += line;
    }
    std::snprintf(line, sizeof(line), "# auc=%.6f\n", curve.auc);
    out += line;
    return out;
}

}  // namespace skinmap
