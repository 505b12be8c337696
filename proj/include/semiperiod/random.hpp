#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

#include "matrix.hpp"

namespace semiperiod {

/// Reproducible random source. The standard <random> distributions are
/// implementation-defined, so draws are derived directly from the engine bits:
/// uniform(0,1) takes the top 53 bits of one mt19937_64 output and categorical
/// draws invert the cumulative distribution.
class Rng {
public:
    static constexpr std::string_view kAlgorithm = "mt19937_64/u53/inverse-cdf";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t below(std::size_t n) {
        auto idx = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return idx < n ? idx : n - 1;
    }

    /// Index drawn from non-negative weights; weights need not be normalized.
    template <typename Weights>
    std::size_t categorical(const Weights& weights, std::size_t count) {
        double total = 0.0;
        for (std::size_t i = 0; i < count; ++i) total += weights(i);
        const double target = uniform() * total;
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < count; ++i) {
            if (weights(i) <= 0.0) continue;
            last_positive = i;
            acc += weights(i);
            if (target < acc) return i;
        }
        return last_positive;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace semiperiod
