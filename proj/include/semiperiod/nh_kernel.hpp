#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kernel.hpp"
#include "matrix.hpp"
#include "model.hpp"

namespace semiperiod {

/// Core sequences and waiting tails for every coding position.
/// Position k uses P(k): C(k,m) = P(k) o H(m), w_i(k,m) = sum_j P(k)[i,j] H(m)[i,j].
struct NHCore {
    std::vector<CoreSequence> by_position;
    std::vector<WaitingTail> waiting;

    std::size_t period() const noexcept { return by_position.size(); }
    const CoreSequence& at(std::size_t k) const { return by_position[k % by_position.size()]; }
    const WaitingTail& wait(std::size_t k) const { return waiting[k % waiting.size()]; }
};

/// Q(k,n) for k = 0..s-1, n = 0..n_max; k is the coding position at entry.
struct NHIntervalKernel {
    std::vector<IntervalKernel> by_position;

    std::size_t period() const noexcept { return by_position.size(); }
    std::size_t horizon() const noexcept { return by_position.empty() ? 0 : by_position.front().horizon(); }
    const Matrix& at(std::size_t k, std::size_t n) const {
        return by_position[k % by_position.size()].at(n);
    }
};

inline NHCore build_nh_core(const NHSemiMarkovModel& model) {
    NHCore out;
    for (std::size_t k = 0; k < model.period(); ++k) {
        out.by_position.push_back(detail::make_core(model.embedded(k), model.holding()));
        out.waiting.push_back(detail::make_waiting(out.by_position.back()));
    }
    return out;
}

/// Q(k,n) = >W(k,n) + sum_{m=1}^{min(n,M)} C(k,m) Q((k+m) mod s, n-m).
inline NHIntervalKernel nh_interval_recursive(const NHCore& core, long n_max) {
    if (n_max < 0) throw ArgumentError("interval horizon must be non-negative, got " + std::to_string(n_max));
    const std::size_t s = core.period();
    const auto horizon = static_cast<std::size_t>(n_max);
    const auto states = static_cast<std::size_t>(core.at(0).zero.rows());
    NHIntervalKernel out;
    out.by_position.resize(s);
    for (auto& kernel : out.by_position) {
        kernel.q.reserve(horizon + 1);
        kernel.q.push_back(identity(states));
    }
    // Q(.,n) only depends on Q(.,n') with n' < n, so fill horizon by horizon.
    for (std::size_t n = 1; n <= horizon; ++n) {
        for (std::size_t k = 0; k < s; ++k) {
            const CoreSequence& c = core.at(k);
            Matrix qn = core.wait(k).survival_matrix(n);
            const std::size_t top = std::min(n, c.horizon());
            for (std::size_t m = 1; m <= top; ++m) {
                qn.noalias() += c.at(m) * out.by_position[(k + m) % s].q[n - m];
            }
            out.by_position[k].q.push_back(std::move(qn));
        }
    }
    return out;
}

inline NHIntervalKernel nh_interval_recursive(const NHSemiMarkovModel& model, long n_max) {
    return nh_interval_recursive(build_nh_core(model), n_max);
}

/// Closed analytic form of Q(k,n). Each core factor of a jump chain is taken at
/// the coding position where its sojourn starts: the factor spanning
/// (m_{x+1}, m_x] uses C(k + m_{x+1} - 1, m_x - m_{x+1}).
inline Matrix nh_interval_closed(const NHCore& core, long k, long n) {
    const auto s = static_cast<long>(core.period());
    if (k < 0 || k >= s) {
        throw ArgumentError("coding position " + std::to_string(k) + " outside [0," + std::to_string(s) + ")");
    }
    if (n < 0) throw ArgumentError("interval horizon must be non-negative, got " + std::to_string(n));
    const auto start = static_cast<std::size_t>(k);
    const auto steps = static_cast<std::size_t>(n);
    const auto states = static_cast<std::size_t>(core.at(0).zero.rows());
    if (steps == 0) return identity(states);

    auto core_at = [&core, start](std::size_t lower, std::size_t m) -> const Matrix& {
        return core.at(start + lower - 1).at(m);
    };
    auto tail = [&core, start, states](std::size_t offset, std::size_t rest) {
        const std::size_t pos = start + offset;
        return Matrix(core.wait(pos).survival_matrix(rest) + core.at(pos).at(rest));
    };

    Matrix out = tail(0, steps);
    for (std::size_t j = 2; j <= steps; ++j) {
        Matrix lead = core.at(start).at(j - 1);
        for (std::size_t x = 1; x + 2 <= j; ++x) lead += detail::nested_sum(core_at, j, x, states);
        out.noalias() += lead * tail(j - 1, steps - j + 1);
    }
    return out;
}

inline Matrix nh_interval_closed(const NHSemiMarkovModel& model, long k, long n) {
    if (k < 0 || static_cast<std::size_t>(k) >= model.period()) {
        throw ArgumentError("coding position " + std::to_string(k) + " outside [0," +
                            std::to_string(model.period()) + ")");
    }
    return nh_interval_closed(build_nh_core(model), k, n);
}

/// p_i(k,d) = >w_i(k,d) + sum_{j != i} sum_{x=1}^{d} c'_{ij}(k,x) q_{ji}((k+x) mod s, d-x),
/// with c' the survival core (paper-survival) or the plain core (exact-entry).
inline Vector nh_return_probability(const NHCore& core, const NHIntervalKernel& q, long k, long d,
                                    ReturnVariant variant) {
    const auto s = static_cast<long>(core.period());
    if (k < 0 || k >= s) {
        throw ArgumentError("coding position " + std::to_string(k) + " outside [0," + std::to_string(s) + ")");
    }
    if (d < 1) throw ArgumentError("return lag d must be at least 1, got " + std::to_string(d));
    const auto start = static_cast<std::size_t>(k);
    const auto lag = static_cast<std::size_t>(d);
    if (q.horizon() + 1 < lag) throw ArgumentError("interval kernel too short for lag " + std::to_string(d));

    const CoreSequence& c = core.at(start);
    const WaitingTail& wait = core.wait(start);
    const auto states = c.zero.rows();
    Vector out(states);
    for (Eigen::Index i = 0; i < states; ++i) out(i) = wait.survival(static_cast<std::size_t>(i), lag);
    for (std::size_t x = 1; x <= lag; ++x) {
        const Matrix& factor = variant == ReturnVariant::PaperSurvival ? c.geq(x) : c.at(x);
        out += (factor * q.at(start + x, lag - x)).diagonal();
    }
    return out;
}

inline Vector nh_return_probability(const NHSemiMarkovModel& model, long k, long d, ReturnVariant variant) {
    if (d < 1) throw ArgumentError("return lag d must be at least 1, got " + std::to_string(d));
    const NHCore core = build_nh_core(model);
    return nh_return_probability(core, nh_interval_recursive(core, d - 1), k, d, variant);
}

}  // namespace semiperiod
