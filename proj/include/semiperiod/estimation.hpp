#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "model.hpp"
#include "sequence.hpp"

namespace semiperiod {

struct Run {
    std::size_t state = 0;
    std::size_t length = 0;
    std::size_t start = 0;  ///< 0-based position of the first symbol
    bool operator==(const Run&) const = default;
};

/// Maximal runs of identical symbols. The last run is always right-censored:
/// the transition that ends it lies beyond the sequence.
struct RunLengthEncoding {
    std::vector<Run> runs;
    bool last_censored = true;
};

inline RunLengthEncoding extract_runs(const SymbolSequence& seq) {
    if (seq.empty()) throw ArgumentError("cannot extract runs from an empty sequence");
    RunLengthEncoding out;
    Run current{seq[0], 1, 0};
    for (std::size_t pos = 1; pos < seq.size(); ++pos) {
        if (seq[pos] == current.state) {
            ++current.length;
            continue;
        }
        out.runs.push_back(current);
        current = Run{seq[pos], 1, pos};
    }
    out.runs.push_back(current);
    return out;
}

enum class ZeroRowPolicy { UniformOffDiagonal, Error };

/// How holding-time laws are formed from duration counts N(i->j, m).
enum class HoldingEstimator {
    /// h_ij(m) = N(i->j,m) / sum_m' N(i->j,m'), the maximum-likelihood estimate.
    ConditionalMle,
    /// N(i->j,m) / sum_x N(i->x,m) (normalized over destinations at fixed m),
    /// then renormalized over m for every (i,j).
    DestinationRatio,
};

inline HoldingEstimator parse_holding_estimator(std::string_view text) {
    if (text == "mle") return HoldingEstimator::ConditionalMle;
    if (text == "destination-ratio") return HoldingEstimator::DestinationRatio;
    throw ArgumentError("unknown holding-time estimator '" + std::string(text) + "'");
}

inline std::string_view to_string(HoldingEstimator e) {
    return e == HoldingEstimator::ConditionalMle ? "mle" : "destination-ratio";
}

struct EstimationConfig {
    std::size_t period = 3;
    std::size_t max_holding = kDefaultMaxHolding;
    ZeroRowPolicy zero_row_policy = ZeroRowPolicy::UniformOffDiagonal;
    bool drop_censored_final_run = true;
    HoldingEstimator holding_estimator = HoldingEstimator::ConditionalMle;

    void validate() const {
        if (period < 1) throw ArgumentError("coding period must be at least 1");
        if (max_holding < 1) throw ArgumentError("holding-time horizon must be at least 1");
    }
};

/// Sufficient statistics of the empirical estimators. Transitions are
/// attributed to the coding position of the departing run's first symbol.
class TransitionCounts {
public:
    TransitionCounts(std::size_t states, std::size_t period, std::size_t max_holding)
        : states_(states),
          transitions_(period, Matrix::Zero(dim(states), dim(states))),
          durations_(max_holding, Matrix::Zero(dim(states), dim(states))),
          overflow_(Matrix::Zero(dim(states), dim(states))) {}

    void add(const Run& run, std::size_t next_state, double weight = 1.0) {
        const auto i = dim(run.state);
        const auto j = dim(next_state);
        transitions_[run.start % transitions_.size()](i, j) += weight;
        if (run.length <= durations_.size()) {
            durations_[run.length - 1](i, j) += weight;
        } else {
            overflow_(i, j) += weight;
        }
    }

    /// N(i(k) -> j)
    const Matrix& transitions(std::size_t k) const { return transitions_.at(k); }
    /// N(i -> j, m), m = 1..M
    const Matrix& durations(std::size_t m) const { return durations_.at(m - 1); }
    /// Transitions whose sojourn exceeded the holding-time horizon.
    const Matrix& overflow() const noexcept { return overflow_; }
    std::size_t period() const noexcept { return transitions_.size(); }
    std::size_t max_holding() const noexcept { return durations_.size(); }
    std::size_t states() const noexcept { return states_; }

    /// Maximal run of state `run.state` that ends before the sequence does:
    /// its destination is unknown, so its weight is spread over the row of the
    /// embedded estimate.
    void add_censored(const Run& run, const Matrix& embedded_row_source) {
        const auto i = dim(run.state);
        for (Eigen::Index j = 0; j < embedded_row_source.cols(); ++j) {
            double w = embedded_row_source(i, j);
            if (w <= 0.0) continue;
            if (run.length <= durations_.size()) {
                durations_[run.length - 1](i, j) += w;
            } else {
                overflow_(i, j) += w;
            }
        }
    }

private:
    static Eigen::Index dim(std::size_t n) { return static_cast<Eigen::Index>(n); }

    std::size_t states_;
    std::vector<Matrix> transitions_;
    std::vector<Matrix> durations_;
    Matrix overflow_;
};

namespace detail {

inline Matrix embedded_from_counts(const Matrix& counts, std::size_t k, ZeroRowPolicy policy,
                                   const StateSpace& states) {
    const auto n = counts.rows();
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double total = counts.row(i).sum();
        if (total > 0.0) {
            p.row(i) = counts.row(i) / total;
            continue;
        }
        if (policy == ZeroRowPolicy::Error) {
            throw ValidationError(std::string("state ") + states.symbol(static_cast<std::size_t>(i)) +
                                  " is never exited at coding position " + std::to_string(k));
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) p(i, j) = 1.0 / static_cast<double>(n - 1);
        }
    }
    return p;
}

inline HoldingTimes holding_from_counts(const TransitionCounts& counts, HoldingEstimator estimator) {
    const auto n = static_cast<Eigen::Index>(counts.states());
    const std::size_t horizon = counts.max_holding();
    HoldingTimes weights(horizon, Matrix::Zero(n, n));
    for (std::size_t m = 1; m <= horizon; ++m) {
        const Matrix& c = counts.durations(m);
        if (estimator == HoldingEstimator::ConditionalMle) {
            weights[m - 1] = c;
            continue;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const double denom = c.row(i).sum();
            if (denom > 0.0) weights[m - 1].row(i) = c.row(i) / denom;
        }
    }
    HoldingTimes h(horizon, Matrix::Zero(n, n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            double total = 0.0;
            for (const Matrix& w : weights) total += w(i, j);
            if (total > 0.0) {
                for (std::size_t m = 0; m < horizon; ++m) h[m](i, j) = weights[m](i, j) / total;
            } else if (counts.overflow()(i, j) > 0.0) {
                h[horizon - 1](i, j) = 1.0;  // every observed sojourn was longer than the horizon
            } else {
                h[0](i, j) = 1.0;  // never observed
            }
        }
    }
    return h;
}

}  // namespace detail

/// Turn counts into a model. `censored` is the right-censored final run (if it
/// should be used); its duration is spread over destinations by the pooled
/// embedded estimate of its coding position.
inline NHSemiMarkovModel model_from_counts(const TransitionCounts& counts, const EstimationConfig& config,
                                           const StateSpace& states, const std::optional<Run>& censored = {}) {
    std::vector<Matrix> embedded;
    embedded.reserve(counts.period());
    for (std::size_t k = 0; k < counts.period(); ++k) {
        embedded.push_back(detail::embedded_from_counts(counts.transitions(k), k, config.zero_row_policy, states));
    }
    if (censored && !config.drop_censored_final_run) {
        TransitionCounts with_censored = counts;
        with_censored.add_censored(*censored, embedded[censored->start % counts.period()]);
        return NHSemiMarkovModel(states, std::move(embedded),
                                 detail::holding_from_counts(with_censored, config.holding_estimator));
    }
    return NHSemiMarkovModel(states, std::move(embedded),
                             detail::holding_from_counts(counts, config.holding_estimator));
}

inline TransitionCounts count_transitions(const RunLengthEncoding& rle, std::size_t states, std::size_t period,
                                          std::size_t max_holding) {
    TransitionCounts counts(states, period, max_holding);
    for (std::size_t r = 0; r + 1 < rle.runs.size(); ++r) counts.add(rle.runs[r], rle.runs[r + 1].state);
    return counts;
}

/// Coding-position-indexed estimate: P(k) from transitions whose departing run
/// starts at a position congruent to k mod s; H pooled over positions.
inline NHSemiMarkovModel estimate_nh(const SymbolSequence& seq, const EstimationConfig& config) {
    config.validate();
    const RunLengthEncoding rle = extract_runs(seq);
    if (rle.runs.size() < 2 && config.zero_row_policy == ZeroRowPolicy::Error) {
        throw ValidationError("sequence has no completed run");
    }
    const TransitionCounts counts = count_transitions(rle, seq.states.size(), config.period, config.max_holding);
    return model_from_counts(counts, config, seq.states, rle.runs.back());
}

inline SemiMarkovModel estimate_homogeneous(const SymbolSequence& seq, const EstimationConfig& config) {
    EstimationConfig flat = config;
    flat.period = 1;
    return estimate_nh(seq, flat).at_position(0);
}

/// Estimates on growing prefixes of one sequence, sharing a single pass over
/// its runs. Prefix lengths must be requested in non-decreasing order.
class RollingEstimator {
public:
    RollingEstimator(const SymbolSequence& seq, EstimationConfig config)
        : seq_(seq),
          config_(config),
          rle_(extract_runs(seq)),
          counts_(seq.states.size(), config.period, config.max_holding) {
        config_.validate();
    }

    NHSemiMarkovModel model_for_prefix(std::size_t length) {
        if (length == 0 || length > seq_.size()) {
            throw ArgumentError("prefix length " + std::to_string(length) + " outside [1," +
                                std::to_string(seq_.size()) + "]");
        }
        if (length < consumed_length_) throw ArgumentError("prefix lengths must be non-decreasing");
        consumed_length_ = length;
        // A run's transition is observed once the next run's first symbol is inside the prefix.
        while (next_run_ + 1 < rle_.runs.size() && rle_.runs[next_run_ + 1].start < length) {
            counts_.add(rle_.runs[next_run_], rle_.runs[next_run_ + 1].state);
            ++next_run_;
        }
        if (config_.zero_row_policy == ZeroRowPolicy::Error && next_run_ == 0) {
            throw ValidationError("prefix of length " + std::to_string(length) + " has no completed run");
        }
        Run tail = rle_.runs[next_run_];
        tail.length = length - tail.start;
        return model_from_counts(counts_, config_, seq_.states, tail);
    }

private:
    const SymbolSequence& seq_;
    EstimationConfig config_;
    RunLengthEncoding rle_;
    TransitionCounts counts_;
    std::size_t next_run_ = 0;
    std::size_t consumed_length_ = 0;
};

inline constexpr std::size_t kDefaultWarmupCycles = 10;

/// Calls `visit(cycle, model)` for cycles 1..floor(len/d). Cycles up to the
/// warm-up use the estimate from the first warmup*d symbols; later cycle n uses
/// the prefix of length n*d + offset (clamped to the sequence).
inline void for_each_rolling_model(const SymbolSequence& seq, long d, const EstimationConfig& config,
                                   std::size_t warmup_cycles, std::size_t offset,
                                   const std::function<void(std::size_t, const NHSemiMarkovModel&)>& visit) {
    if (d < 1) throw ArgumentError("cycle length d must be at least 1, got " + std::to_string(d));
    if (warmup_cycles < 1) throw ArgumentError("warm-up must cover at least one cycle");
    const auto cycle = static_cast<std::size_t>(d);
    const std::size_t minimum = warmup_cycles * cycle;
    if (seq.size() < minimum) {
        throw ArgumentError("sequence of length " + std::to_string(seq.size()) + " is shorter than the warm-up window; need at least " +
                            std::to_string(minimum) + " symbols (" + std::to_string(warmup_cycles) +
                            " cycles of length " + std::to_string(cycle) + ")");
    }
    RollingEstimator rolling(seq, config);
    const NHSemiMarkovModel warm = rolling.model_for_prefix(minimum);
    const std::size_t cycles = seq.size() / cycle;
    for (std::size_t n = 1; n <= cycles; ++n) {
        if (n <= warmup_cycles) {
            visit(n, warm);
            continue;
        }
        visit(n, rolling.model_for_prefix(std::min(n * cycle + offset, seq.size())));
    }
}

/// One model per complete cycle; element n-1 belongs to cycle n.
inline std::vector<NHSemiMarkovModel> rolling_estimate(const SymbolSequence& seq, long d,
                                                       const EstimationConfig& config,
                                                       std::size_t warmup_cycles = kDefaultWarmupCycles,
                                                       std::size_t offset = 0) {
    std::vector<NHSemiMarkovModel> out;
    for_each_rolling_model(seq, d, config, warmup_cycles, offset,
                           [&out](std::size_t, const NHSemiMarkovModel& m) { out.push_back(m); });
    return out;
}

}  // namespace semiperiod
