#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "model.hpp"
#include "random.hpp"
#include "sequence.hpp"

namespace semiperiod {

namespace detail {

/// One jump: next state from the P row of the entry position, then the
/// sojourn length from H(.)[from, next].
inline std::pair<std::size_t, std::size_t> draw_jump(Rng& rng, const Matrix& p, const HoldingTimes& h,
                                                     std::size_t from) {
    const std::size_t n = static_cast<std::size_t>(p.cols());
    const auto row = static_cast<Eigen::Index>(from);
    std::size_t next = rng.categorical([&](std::size_t j) { return p(row, static_cast<Eigen::Index>(j)); }, n);
    const auto col = static_cast<Eigen::Index>(next);
    std::size_t hold = 1 + rng.categorical([&](std::size_t m) { return h[m](row, col); }, h.size());
    return {next, hold};
}

inline SymbolSequence simulate(const NHSemiMarkovModel& model, std::size_t length, std::uint64_t seed) {
    if (length == 0) throw ArgumentError("simulated length must be at least 1");
    Rng rng(seed);
    SymbolSequence out{model.states(), {}, "simulated seed=" + std::to_string(seed)};
    out.symbols.reserve(length);
    std::size_t state = rng.below(model.size());
    while (out.symbols.size() < length) {
        const std::size_t entry = out.symbols.size();
        auto [next, hold] = draw_jump(rng, model.embedded(entry % model.period()), model.holding(), state);
        for (std::size_t t = 0; t < hold && out.symbols.size() < length; ++t) {
            out.symbols.push_back(static_cast<std::uint8_t>(state));
        }
        state = next;
    }
    return out;
}

}  // namespace detail

/// Trajectory of the chain truncated to `length` symbols. The initial state is
/// uniform and is entered at position 0 (coding position 0).
inline SymbolSequence simulate_smc(const SemiMarkovModel& model, std::size_t length, std::uint64_t seed) {
    return detail::simulate(NHSemiMarkovModel::lift(model, 1), length, seed);
}

inline SymbolSequence simulate_smc(const NHSemiMarkovModel& model, std::size_t length, std::uint64_t seed) {
    return detail::simulate(model, length, seed);
}

struct MonteCarloEstimate {
    Vector estimate;
    Vector standard_error;
};

/// Empirical P(state i at position d | i entered at position 0) with binomial
/// standard errors; `position` is the coding position of the entry.
inline MonteCarloEstimate mc_return_probability(const NHSemiMarkovModel& model, long d, std::size_t trials,
                                                std::uint64_t seed, std::size_t position = 0) {
    if (d < 1) throw ArgumentError("return lag d must be at least 1, got " + std::to_string(d));
    if (trials == 0) throw ArgumentError("trials must be at least 1");
    const auto lag = static_cast<std::size_t>(d);
    const auto n = static_cast<Eigen::Index>(model.size());
    MonteCarloEstimate out{Vector::Zero(n), Vector::Zero(n)};
    Rng rng(seed);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::size_t hits = 0;
        for (std::size_t trial = 0; trial < trials; ++trial) {
            std::size_t state = static_cast<std::size_t>(i);
            std::size_t t = 0;
            while (true) {
                auto [next, hold] =
                    detail::draw_jump(rng, model.embedded((position + t) % model.period()), model.holding(), state);
                if (t + hold > lag) break;
                t += hold;
                state = next;
            }
            hits += state == static_cast<std::size_t>(i);
        }
        const double p = static_cast<double>(hits) / static_cast<double>(trials);
        out.estimate(i) = p;
        out.standard_error(i) = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }
    return out;
}

inline MonteCarloEstimate mc_return_probability(const SemiMarkovModel& model, long d, std::size_t trials,
                                                std::uint64_t seed) {
    return mc_return_probability(NHSemiMarkovModel::lift(model, 1), d, trials, seed);
}

/// Random valid model for property tests and the verify command. Roughly one
/// off-diagonal entry in five of P and of each holding law is zeroed.
inline NHSemiMarkovModel random_nh_model(std::uint64_t seed, std::size_t states, std::size_t period,
                                         std::size_t max_holding, const StateSpace& alphabet = StateSpace::dna()) {
    if (alphabet.size() != states) throw ArgumentError("alphabet size does not match state count");
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(states);
    auto sparse_weight = [&rng]() { return rng.uniform() < 0.2 ? 0.0 : 0.05 + rng.uniform(); };

    std::vector<Matrix> embedded;
    for (std::size_t k = 0; k < period; ++k) {
        Matrix p = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i != j) p(i, j) = sparse_weight();
            }
            if (p.row(i).sum() == 0.0) p(i, (i + 1) % n) = 1.0;
            p.row(i) /= p.row(i).sum();
        }
        embedded.push_back(std::move(p));
    }

    HoldingTimes h(max_holding, Matrix::Zero(n, n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            double total = 0.0;
            for (auto& hm : h) total += (hm(i, j) = sparse_weight());
            if (total == 0.0) total = (h[0](i, j) = 1.0);
            for (auto& hm : h) hm(i, j) /= total;
        }
    }
    return NHSemiMarkovModel(alphabet, std::move(embedded), std::move(h));
}

inline SemiMarkovModel random_model(std::uint64_t seed, std::size_t states, std::size_t max_holding,
                                    const StateSpace& alphabet = StateSpace::dna()) {
    return random_nh_model(seed, states, 1, max_holding, alphabet).at_position(0);
}

}  // namespace semiperiod
