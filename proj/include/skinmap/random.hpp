#ifndef SKINMAP_RANDOM_HPP
#define SKINMAP_RANDOM_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_map>
#include <vector>

namespace skinmap {

/**
 * Seeded generator used for every stochastic step (sampling, initialization,
 * synthetic data).
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. The std:: distributions are not, so the few draws needed here are
 * derived from raw engine output to keep results identical across standard
 * libraries.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound) {
        // rejection sampling removes modulo bias
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw (Box-Muller, second value cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Draws `count` distinct indices from [0, n) in draw order. Partial
    /// Fisher-Yates over a sparse swap table, so memory is O(count).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count) {
        if (count > n) count = n;
        std::unordered_map<std::size_t, std::size_t> swapped;
        const auto value_at = [&swapped](std::size_t i) {
            const auto it = swapped.find(i);
            return it == swapped.end() ? i : it->second;
        };
        std::vector<std::size_t> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            const auto j = i + static_cast<std::size_t>(uniform_index(n - i));
            const std::size_t picked = value_at(j);
            swapped[j] = value_at(i);
            out.push_back(picked);
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace skinmap

#endif  // SKINMAP_RANDOM_HPP
