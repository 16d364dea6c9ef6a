#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skinmap/errors.hpp"
#include "skinmap/random.hpp"
#include "skinmap/roc.hpp"

using namespace skinmap;

namespace {

ConfusionCounts brute_counts(const SkinProbabilityMap& spm, const MaskBuffer& mask, double t) {
    ConfusionCounts c;
    for (std::size_t i = 0; i < spm.values.size(); ++i) {
        const bool skin = mask.labels[i] != 0;
        const bool pos = spm.values[i] >= t;
        c.s += skin;
        c.ns += !skin;
        c.tp += skin && pos;
        c.fp += !skin && pos;
    }
    return c;
}

struct Pair {
    SkinProbabilityMap spm;
    MaskBuffer mask;
};

Pair random_pair(int w, int h, std::uint64_t seed, bool grid_values) {
    Rng rng(seed);
    Pair p{{w, h, {}}, MaskBuffer(w, h)};
    for (std::size_t i = 0; i < p.mask.size(); ++i) {
        p.spm.values.push_back(grid_values ? static_cast<double>(rng.uniform_index(1001)) / 1000.0 : rng.uniform01());
        p.mask.labels[i] = rng.uniform_index(3) == 0 ? 1 : 0;
    }
    return p;
}

const SkinProbabilityMap kFour{4, 1, {0.9, 0.6, 0.4, 0.1}};
const MaskBuffer kFourMask(4, 1, {1, 0, 1, 0});

}  // namespace

TEST_CASE("confusion counts on a four-pixel example") {
    const auto c = confusion_at(kFour, kFourMask, 0.5);
    CHECK(c == ConfusionCounts{1, 1, 2, 2});
    const auto r = rates(c);
    CHECK(r.tpr == 0.5);
    CHECK(r.fpr == 0.5);

    CHECK(confusion_at(kFour, kFourMask, 0.4) == ConfusionCounts{2, 1, 2, 2});
    CHECK(confusion_at(kFour, kFourMask, 0.95) == ConfusionCounts{0, 0, 2, 2});
    CHECK(confusion_at(kFour, kFourMask, 0.1) == ConfusionCounts{2, 2, 2, 2});
}

TEST_CASE("degenerate masks and shape mismatch") {
    const SkinProbabilityMap spm{2, 1, {0.2, 0.8}};
    CHECK_THROWS_AS(rates(confusion_at(spm, MaskBuffer(2, 1, {1, 1}), 0.5)), DegenerateMaskError);
    CHECK_THROWS_AS(rates(confusion_at(spm, MaskBuffer(2, 1, {0, 0}), 0.5)), DegenerateMaskError);
    CHECK_THROWS_AS(roc_sweep(spm, MaskBuffer(2, 1, {0, 0})), DegenerateMaskError);
    CHECK_THROWS_AS(confusion_at(spm, MaskBuffer(1, 2, {0, 1}), 0.5), ContractViolation);
    CHECK_THROWS_AS(aggregate_roc(std::span<const SkinProbabilityMap>{}, std::span<const MaskBuffer>{}),
                    DegenerateMaskError);
}

TEST_CASE("sweep counts agree with brute force") {
    for (bool grid : {false, true}) {
        const auto p = random_pair(37, 29, grid ? 3 : 4, grid);
        const auto counts = sweep_counts(p.spm, p.mask);
        REQUIRE(counts.size() == static_cast<std::size_t>(kThresholdCount));
        for (int k = 1; k <= kThresholdCount; ++k)
            CHECK(counts[static_cast<std::size_t>(k - 1)] == brute_counts(p.spm, p.mask, sweep_threshold(k)));
    }
}

TEST_CASE("roc_sweep shape") {
    const auto p = random_pair(50, 40, 11, false);
    const auto curve = roc_sweep(p.spm, p.mask);
    REQUIRE(curve.points.size() == 999);
    CHECK(curve.points.front().threshold == 0.001);
    CHECK(curve.points.back().threshold == 0.999);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        CHECK(curve.points[i].threshold > curve.points[i - 1].threshold);
        CHECK(curve.points[i].tpr <= curve.points[i - 1].tpr);
        CHECK(curve.points[i].fpr <= curve.points[i - 1].fpr);
    }
    CHECK(curve.auc >= 0.0);
    CHECK(curve.auc <= 1.0);
}

TEST_CASE("reference curves") {
    SUBCASE("perfect separation") {
        const SkinProbabilityMap spm{4, 1, {1.0, 0.0, 1.0, 0.0}};
        CHECK(roc_sweep(spm, kFourMask).auc == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("constant map") {
        const SkinProbabilityMap spm{4, 1, {0.5, 0.5, 0.5, 0.5}};
        CHECK(roc_sweep(spm, kFourMask).auc == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("inverted map") {
        const SkinProbabilityMap spm{4, 1, {0.0, 1.0, 0.0, 1.0}};
        CHECK(roc_sweep(spm, kFourMask).auc == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("four-pixel example") {
        // steps: (0,0) (0,.5) (.5,.5) (.5,1) (1,1) -> 0.75
        CHECK(roc_sweep(kFour, kFourMask).auc == doctest::Approx(0.75).epsilon(1e-12));
    }
}

TEST_CASE("trapezoidal auc") {
    const std::vector<RocPoint> diagonal{{0.1, 1.0, 1.0}, {0.5, 0.5, 0.5}, {0.9, 0.0, 0.0}};
    CHECK(auc(diagonal) == doctest::Approx(0.5).epsilon(1e-12));

    const std::vector<RocPoint> one{{0.5, 0.25, 0.75}};
    CHECK(auc(one) == doctest::Approx(0.75).epsilon(1e-12));

    const std::vector<RocPoint> unsorted{{0.7, 0.5, 0.9}, {0.3, 0.2, 0.4}};
    // (0,0) (.2,.4) (.5,.9) (1,1): .04 + .195 + .475
    CHECK(auc(unsorted) == doctest::Approx(0.71).epsilon(1e-12));

    CHECK(auc(std::span<const RocPoint>{}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("aggregate pools counts") {
    const auto a = random_pair(20, 10, 21, false);
    const auto b = random_pair(7, 13, 22, true);

    SUBCASE("single pair equals roc_sweep") {
        const std::vector<SkinProbabilityMap> spms{a.spm};
        const std::vector<MaskBuffer> masks{a.mask};
        const auto pooled = aggregate_roc(spms, masks);
        const auto single = roc_sweep(a.spm, a.mask);
        CHECK(pooled.auc == single.auc);
        for (std::size_t i = 0; i < single.points.size(); ++i) {
            CHECK(pooled.points[i].tpr == single.points[i].tpr);
            CHECK(pooled.points[i].fpr == single.points[i].fpr);
        }
    }
    SUBCASE("two pairs match brute pooled counts") {
        const std::vector<SkinProbabilityMap> spms{a.spm, b.spm};
        const std::vector<MaskBuffer> masks{a.mask, b.mask};
        const auto pooled = aggregate_roc(spms, masks);
        for (int k = 1; k <= kThresholdCount; k += 37) {
            const double t = sweep_threshold(k);
            const auto ca = brute_counts(a.spm, a.mask, t);
            const auto cb = brute_counts(b.spm, b.mask, t);
            const auto& pt = pooled.points[static_cast<std::size_t>(k - 1)];
            CHECK(pt.tpr == static_cast<double>(ca.tp + cb.tp) / static_cast<double>(ca.s + cb.s));
            CHECK(pt.fpr == static_cast<double>(ca.fp + cb.fp) / static_cast<double>(ca.ns + cb.ns));
        }
    }
    SUBCASE("order independent") {
        const std::vector<SkinProbabilityMap> ab{a.spm, b.spm}, ba{b.spm, a.spm};
        const std::vector<MaskBuffer> mab{a.mask, b.mask}, mba{b.mask, a.mask};
        CHECK(aggregate_roc(ab, mab).auc == aggregate_roc(ba, mba).auc);
    }
    SUBCASE("an all-skin image is fine when the pool has both classes") {
        const SkinProbabilityMap spm{2, 1, {0.3, 0.7}};
        const std::vector<SkinProbabilityMap> spms{spm, a.spm};
        const std::vector<MaskBuffer> masks{MaskBuffer(2, 1, {1, 1}), a.mask};
        CHECK_NOTHROW(aggregate_roc(spms, masks));
    }
    SUBCASE("length mismatch") {
        const std::vector<SkinProbabilityMap> spms{a.spm, b.spm};
        const std::vector<MaskBuffer> masks{a.mask};
        CHECK_THROWS_AS(aggregate_roc(spms, masks), ContractViolation);
    }
}

TEST_CASE("uninformative map has auc near one half") {
    const auto p = random_pair(400, 250, 99, false);
    CHECK(std::abs(roc_sweep(p.spm, p.mask).auc - 0.5) <= 0.02);
}

TEST_CASE("csv format") {
    const auto curve = roc_sweep(kFour, kFourMask);
    const auto csv = roc_to_csv(curve);
    std::istringstream in(csv);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    REQUIRE(lines.size() == 1001);
    CHECK(lines.front() == "threshold,fpr,tpr");
    CHECK(lines[1] == "0.001000,1.000000,1.000000");
    CHECK(lines[500] == "0.500000,0.500000,0.500000");
    CHECK(lines[999] == "0.999000,0.000000,0.000000");
    CHECK(lines.back() == "# auc=0.750000");
    CHECK(csv.back() == '\n');
}
