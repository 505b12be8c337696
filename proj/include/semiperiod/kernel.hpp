#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "model.hpp"

namespace semiperiod {

/// How the first sojourn is weighted in the d-step return probability.
enum class ReturnVariant {
    /// Survival-weighted core factors: the age of the current run at the
    /// observation origin is unknown, so every run that is still alive counts.
    PaperSurvival,
    /// Standard Markov-renewal semantics: the origin is the entry into the run,
    /// which makes p_i(d) equal the diagonal of Q(d).
    ExactEntry,
};

inline std::string_view to_string(ReturnVariant v) {
    return v == ReturnVariant::PaperSurvival ? "paper-survival" : "exact-entry";
}

inline ReturnVariant parse_variant(std::string_view text) {
    if (text == "paper-survival") return ReturnVariant::PaperSurvival;
    if (text == "exact-entry") return ReturnVariant::ExactEntry;
    throw ArgumentError("unknown return-probability variant '" + std::string(text) +
                        "' (expected paper-survival or exact-entry)");
}

/// C(m) = P o H(m) and the survival cores >=C(k) = P o >=H(k).
struct CoreSequence {
    std::vector<Matrix> core;      ///< index m-1 holds C(m), m = 1..M
    std::vector<Matrix> core_geq;  ///< index k-1 holds >=C(k), k = 1..M
    Matrix zero;

    std::size_t horizon() const noexcept { return core.size(); }
    /// C(m), zero for m = 0 or m > M.
    const Matrix& at(std::size_t m) const {
        return (m == 0 || m > core.size()) ? zero : core[m - 1];
    }
    /// >=C(k); >=C(0) is taken equal to >=C(1) and zero beyond M.
    const Matrix& geq(std::size_t k) const {
        if (k == 0) k = 1;
        return k > core_geq.size() ? zero : core_geq[k - 1];
    }
};

/// Unconditional waiting-time law w_i(m) and its tail >w_i(n) = P(wait > n).
struct WaitingTail {
    Matrix pmf;   ///< N x M, column m-1 holds w_.(m)
    Matrix tail;  ///< N x (M+1), column n holds >w_.(n)

    double survival(std::size_t i, std::size_t n) const {
        auto col = static_cast<Eigen::Index>(n);
        return col >= tail.cols() ? 0.0 : tail(static_cast<Eigen::Index>(i), col);
    }
    /// diag(>w_i(n)).
    Matrix survival_matrix(std::size_t n) const {
        Matrix out = zeros(static_cast<std::size_t>(tail.rows()));
        for (Eigen::Index i = 0; i < tail.rows(); ++i) out(i, i) = survival(static_cast<std::size_t>(i), n);
        return out;
    }
};

/// Q(0..n_max) where Q(n)[i,j] is the probability of occupying j exactly n
/// positions after entering i.
struct IntervalKernel {
    std::vector<Matrix> q;

    std::size_t horizon() const noexcept { return q.empty() ? 0 : q.size() - 1; }
    const Matrix& at(std::size_t n) const { return q.at(n); }
};

namespace detail {

inline CoreSequence make_core(const Matrix& p, const HoldingTimes& h) {
    CoreSequence out;
    const std::size_t horizon = h.size();
    out.zero = Matrix::Zero(p.rows(), p.cols());
    out.core.reserve(horizon);
    for (const Matrix& hm : h) out.core.push_back(p.cwiseProduct(hm));
    // Suffix sums of H, then one Hadamard product each.
    out.core_geq.assign(horizon, out.zero);
    Matrix suffix = out.zero;
    for (std::size_t k = horizon; k-- > 0;) {
        suffix += h[k];
        out.core_geq[k] = p.cwiseProduct(suffix);
    }
    return out;
}

inline WaitingTail make_waiting(const CoreSequence& core) {
    const auto n = core.zero.rows();
    const auto horizon = static_cast<Eigen::Index>(core.horizon());
    WaitingTail out{Matrix::Zero(n, horizon), Matrix::Zero(n, horizon + 1)};
    for (Eigen::Index m = 0; m < horizon; ++m) {
        out.pmf.col(m) = core.core[static_cast<std::size_t>(m)].rowwise().sum();
    }
    // >w_i(n) = sum_j p_ij >=h_ij(n+1)
    for (Eigen::Index t = 0; t < horizon; ++t) {
        out.tail.col(t) = core.core_geq[static_cast<std::size_t>(t)].rowwise().sum();
    }
    return out;
}

}  // namespace detail

inline CoreSequence build_core(const SemiMarkovModel& model) {
    return detail::make_core(model.embedded(), model.holding());
}

inline WaitingTail waiting_time_pmf(const SemiMarkovModel& model) {
    return detail::make_waiting(build_core(model));
}

/// Q(n) = >W(n) + sum_{m=1}^{min(n,M)} C(m) Q(n-m), Q(0) = I.
inline IntervalKernel interval_transition_recursive(const CoreSequence& core, const WaitingTail& wait,
                                                    long n_max) {
    if (n_max < 0) throw ArgumentError("interval horizon must be non-negative, got " + std::to_string(n_max));
    const auto horizon = static_cast<std::size_t>(n_max);
    const auto states = static_cast<std::size_t>(core.zero.rows());
    IntervalKernel out;
    out.q.reserve(horizon + 1);
    out.q.push_back(identity(states));
    for (std::size_t n = 1; n <= horizon; ++n) {
        Matrix qn = wait.survival_matrix(n);
        const std::size_t top = std::min(n, core.horizon());
        for (std::size_t m = 1; m <= top; ++m) qn.noalias() += core.at(m) * out.q[n - m];
        out.q.push_back(std::move(qn));
    }
    return out;
}

inline IntervalKernel interval_transition_recursive(const SemiMarkovModel& model, long n_max) {
    const CoreSequence core = build_core(model);
    return interval_transition_recursive(core, detail::make_waiting(core), n_max);
}

namespace detail {

/// Sum over all jump chains 1 = m_{k+1} < m_k < ... < m_1 < m_0 = j of the
/// ordered product C(m_k - m_{k+1}) ... C(m_0 - m_1), i.e. the nested sums
/// S_j(k, m_k). Level l picks m_l in [m_{l+1} + 1, j - l].
template <typename CoreAt>
void accumulate_chains(const CoreAt& core_at, std::size_t level, std::size_t prev, std::size_t j,
                       const Matrix& prefix, Matrix& out) {
    if (level == 0) {
        const Matrix& last = core_at(prev, j - prev);
        if (!last.isZero(0.0)) out.noalias() += prefix * last;
        return;
    }
    for (std::size_t m = prev + 1; m + level <= j; ++m) {
        const Matrix& factor = core_at(prev, m - prev);
        if (factor.isZero(0.0)) continue;  // the whole product vanishes
        Matrix next = prefix * factor;
        accumulate_chains(core_at, level - 1, m, j, next, out);
    }
}

/// S_j(k, m_k) for k >= 1. Zero unless j >= k + 2.
template <typename CoreAt>
Matrix nested_sum(const CoreAt& core_at, std::size_t j, std::size_t k, std::size_t states) {
    Matrix out = zeros(states);
    if (j < k + 2) return out;
    accumulate_chains(core_at, k, 1, j, identity(states), out);
    return out;
}

}  // namespace detail

/// Closed analytic form of Q(n):
///   >W(n) + C(n) + sum_{j=2}^{n} {C(j-1) + sum_{k=1}^{j-2} S_j(k)} {>W(n-j+1) + C(n-j+1)}.
/// Enumerates jump chains explicitly; cost grows like 2^n when M is large.
inline Matrix interval_transition_closed(const CoreSequence& core, const WaitingTail& wait, long n) {
    if (n < 0) throw ArgumentError("interval horizon must be non-negative, got " + std::to_string(n));
    const auto states = static_cast<std::size_t>(core.zero.rows());
    const auto steps = static_cast<std::size_t>(n);
    if (steps == 0) return identity(states);
    auto core_at = [&core](std::size_t /*start*/, std::size_t m) -> const Matrix& { return core.at(m); };

    Matrix out = wait.survival_matrix(steps) + core.at(steps);
    for (std::size_t j = 2; j <= steps; ++j) {
        Matrix lead = core.at(j - 1);
        for (std::size_t k = 1; k + 2 <= j; ++k) lead += detail::nested_sum(core_at, j, k, states);
        const std::size_t rest = steps - j + 1;
        out.noalias() += lead * (wait.survival_matrix(rest) + core.at(rest));
    }
    return out;
}

inline Matrix interval_transition_closed(const SemiMarkovModel& model, long n) {
    const CoreSequence core = build_core(model);
    return interval_transition_closed(core, detail::make_waiting(core), n);
}

/// Per-state probability of occupying state i again d positions later.
/// `q` must reach at least horizon d.
inline Vector return_probability(const CoreSequence& core, const WaitingTail& wait,
                                 const IntervalKernel& q, long d, ReturnVariant variant) {
    if (d < 1) throw ArgumentError("return lag d must be at least 1, got " + std::to_string(d));
    const auto lag = static_cast<std::size_t>(d);
    if (q.horizon() < lag) throw ArgumentError("interval kernel too short for lag " + std::to_string(d));
    const auto states = core.zero.rows();
    if (variant == ReturnVariant::ExactEntry) return q.at(lag).diagonal();

    Vector out(states);
    for (Eigen::Index i = 0; i < states; ++i) out(i) = wait.survival(static_cast<std::size_t>(i), lag);
    // diag(>=C(k) Q(d-k)); the zero diagonal of P restricts the sum to j != i.
    for (std::size_t k = 1; k <= lag; ++k) {
        out += (core.geq(k) * q.at(lag - k)).diagonal();
    }
    return out;
}

inline Vector return_probability(const SemiMarkovModel& model, long d, ReturnVariant variant) {
    if (d < 1) throw ArgumentError("return lag d must be at least 1, got " + std::to_string(d));
    const CoreSequence core = build_core(model);
    const WaitingTail wait = detail::make_waiting(core);
    return return_probability(core, wait, interval_transition_recursive(core, wait, d), d, variant);
}

}  // namespace semiperiod
