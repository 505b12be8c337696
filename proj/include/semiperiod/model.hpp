#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "state_space.hpp"

namespace semiperiod {

/// Default holding-time horizon (longest representable run).
inline constexpr std::size_t kDefaultMaxHolding = 30;

inline constexpr double kModelTolerance = 1e-12;

/// Conditional holding-time distributions h_{i,j}(m), m = 1..max_holding().
/// Stored as one N x N matrix per duration; index 0 holds m = 1.
using HoldingTimes = std::vector<Matrix>;

namespace detail {

inline void check_embedded(const Matrix& p, std::size_t n, const std::string& label) {
    if (static_cast<std::size_t>(p.rows()) != n || static_cast<std::size_t>(p.cols()) != n) {
        throw ValidationError(label + " must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            double v = p(i, j);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ValidationError(label + " row " + std::to_string(i) + " has entry " +
                                      std::to_string(v) + " outside [0,1]");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kModelTolerance) {
            throw ValidationError(label + " row " + std::to_string(i) + " sums to " +
                                  std::to_string(sum) + ", expected 1");
        }
        if (p(i, i) != 0.0) {
            throw ValidationError(label + " row " + std::to_string(i) +
                                  " has a virtual transition (non-zero diagonal)");
        }
    }
}

inline void check_holding(const HoldingTimes& h, std::size_t n,
                          const std::vector<const Matrix*>& embedded) {
    if (h.empty()) throw ValidationError("holding-time horizon must be at least 1");
    for (std::size_t m = 0; m < h.size(); ++m) {
        if (static_cast<std::size_t>(h[m].rows()) != n ||
            static_cast<std::size_t>(h[m].cols()) != n) {
            throw ValidationError("H(" + std::to_string(m + 1) + ") has the wrong shape");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            bool used = false;
            for (const Matrix* p : embedded) used = used || (*p)(i, j) > 0.0;
            if (!used) continue;
            double sum = 0.0;
            for (std::size_t m = 0; m < h.size(); ++m) {
                double v = h[m](i, j);
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw ValidationError("H(" + std::to_string(m + 1) + ") row " +
                                          std::to_string(i) + " has entry outside [0,1]");
                }
                sum += v;
            }
            if (std::abs(sum - 1.0) > kModelTolerance) {
                throw ValidationError("holding times for row " + std::to_string(i) + " -> " +
                                      std::to_string(j) + " sum to " + std::to_string(sum));
            }
        }
    }
}

}  // namespace detail

/// Cut a holding-time sequence down to `max_holding` durations and push the
/// removed tail mass back into the support proportionally. Columns whose whole
/// mass lies beyond the horizon collapse onto the last representable duration.
inline HoldingTimes truncate_holding(const HoldingTimes& h, std::size_t max_holding) {
    if (max_holding == 0) throw ArgumentError("holding-time horizon must be at least 1");
    if (h.empty()) throw ArgumentError("empty holding-time sequence");
    const auto rows = h.front().rows();
    const auto cols = h.front().cols();
    HoldingTimes out(max_holding, Matrix::Zero(rows, cols));
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            double kept = 0.0;
            double total = 0.0;
            for (std::size_t m = 0; m < h.size(); ++m) {
                total += h[m](i, j);
                if (m < max_holding) kept += h[m](i, j);
            }
            if (total <= 0.0) continue;
            if (kept <= 0.0) {
                out[max_holding - 1](i, j) = 1.0;
                continue;
            }
            for (std::size_t m = 0; m < std::min(max_holding, h.size()); ++m) {
                out[m](i, j) = h[m](i, j) / kept;
            }
        }
    }
    return out;
}

/// Homogeneous discrete-time semi-Markov chain: embedded jump matrix P with a
/// zero diagonal plus holding-time laws H(m) for each (from, to) pair.
class SemiMarkovModel {
public:
    SemiMarkovModel(StateSpace states, Matrix embedded, HoldingTimes holding)
        : states_(std::move(states)), embedded_(std::move(embedded)), holding_(std::move(holding)) {
        detail::check_embedded(embedded_, states_.size(), "P");
        detail::check_holding(holding_, states_.size(), {&embedded_});
    }

    const StateSpace& states() const noexcept { return states_; }
    std::size_t size() const noexcept { return states_.size(); }
    const Matrix& embedded() const noexcept { return embedded_; }
    const HoldingTimes& holding() const noexcept { return holding_; }
    /// H(m) for 1 <= m <= max_holding(); zero outside the support.
    Matrix holding(std::size_t m) const {
        if (m == 0 || m > holding_.size()) return zeros(size());
        return holding_[m - 1];
    }
    std::size_t max_holding() const noexcept { return holding_.size(); }

private:
    StateSpace states_;
    Matrix embedded_;
    HoldingTimes holding_;
};

/// Partially non-homogeneous chain: the embedded matrix depends on the coding
/// position (entry position mod period) while holding times are shared.
class NHSemiMarkovModel {
public:
    NHSemiMarkovModel(StateSpace states, std::vector<Matrix> embedded, HoldingTimes holding)
        : states_(std::move(states)), embedded_(std::move(embedded)), holding_(std::move(holding)) {
        if (embedded_.empty()) throw ValidationError("period must be at least 1");
        std::vector<const Matrix*> ptrs;
        for (std::size_t k = 0; k < embedded_.size(); ++k) {
            detail::check_embedded(embedded_[k], states_.size(), "P(" + std::to_string(k) + ")");
            ptrs.push_back(&embedded_[k]);
        }
        detail::check_holding(holding_, states_.size(), ptrs);
    }

    /// Same embedded matrix at every coding position.
    static NHSemiMarkovModel lift(const SemiMarkovModel& model, std::size_t period) {
        if (period == 0) throw ArgumentError("period must be at least 1");
        return NHSemiMarkovModel(model.states(), std::vector<Matrix>(period, model.embedded()),
                                 model.holding());
    }

    const StateSpace& states() const noexcept { return states_; }
    std::size_t size() const noexcept { return states_.size(); }
    std::size_t period() const noexcept { return embedded_.size(); }
    const Matrix& embedded(std::size_t k) const { return embedded_.at(k % embedded_.size()); }
    const std::vector<Matrix>& embedded_all() const noexcept { return embedded_; }
    const HoldingTimes& holding() const noexcept { return holding_; }
    Matrix holding(std::size_t m) const {
        if (m == 0 || m > holding_.size()) return zeros(size());
        return holding_[m - 1];
    }
    std::size_t max_holding() const noexcept { return holding_.size(); }

    /// The homogeneous chain that uses P(k) at every position.
    SemiMarkovModel at_position(std::size_t k) const {
        return SemiMarkovModel(states_, embedded(k), holding_);
    }

private:
    StateSpace states_;
    std::vector<Matrix> embedded_;
    HoldingTimes holding_;
};

}  // namespace semiperiod
