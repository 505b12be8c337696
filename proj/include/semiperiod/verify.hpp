#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kernel.hpp"
#include "matrix.hpp"
#include "nh_kernel.hpp"
#include "random.hpp"
#include "simulate.hpp"

namespace semiperiod {

inline constexpr double kKernelTolerance = 1e-10;

struct VerifyOptions {
    std::size_t homogeneous_models = 20;
    std::size_t nh_models = 10;
    long horizon = 12;     ///< homogeneous n_max
    long nh_horizon = 12;  ///< NH n_max
    std::uint64_t seed = 1;
    std::size_t states = 4;
    std::size_t period = 3;
    std::size_t max_holding_cap = 6;
    /// Negative control: nudge C(1)[0,1] in the closed-form inputs only.
    bool perturb = false;
};

struct VerifyCase {
    bool nh = false;
    std::uint64_t seed = 0;
    std::size_t max_holding = 0;
    double closed_error = 0.0;  ///< max |Q_closed - Q_recursive|
    double row_error = 0.0;     ///< max |row sum - 1| over all Q
    bool passed() const { return closed_error <= kKernelTolerance && row_error <= kKernelTolerance; }
};

struct VerifyReport {
    std::vector<VerifyCase> cases;
    bool passed() const {
        return std::all_of(cases.begin(), cases.end(), [](const VerifyCase& c) { return c.passed(); });
    }
};

namespace detail {

inline void nudge(CoreSequence& core) {
    if (core.core.empty() || core.zero.cols() < 2) return;
    core.core[0](0, 1) += 1e-6;
}

}  // namespace detail

/// Closed form against recursion, and row-stochasticity, on random models.
/// Case i uses model seed `seed + i`; horizons M are drawn in 2..cap.
inline VerifyReport verify_kernels(const VerifyOptions& options) {
    VerifyReport report;
    Rng picker(options.seed ^ 0x9e3779b97f4a7c15ULL);
    const std::size_t cap = std::max<std::size_t>(options.max_holding_cap, 1);
    auto pick_horizon = [&]() { return cap == 1 ? std::size_t{1} : 2 + picker.below(cap - 1); };

    for (std::size_t c = 0; c < options.homogeneous_models; ++c) {
        VerifyCase vc{false, options.seed + c, pick_horizon()};
        const SemiMarkovModel model = random_model(vc.seed, options.states, vc.max_holding);
        const CoreSequence core = build_core(model);
        const WaitingTail wait = detail::make_waiting(core);
        CoreSequence closed_core = core;
        if (options.perturb) detail::nudge(closed_core);
        const IntervalKernel q = interval_transition_recursive(core, wait, options.horizon);
        for (long n = 0; n <= options.horizon; ++n) {
            const Matrix& rec = q.at(static_cast<std::size_t>(n));
            vc.closed_error = std::max(vc.closed_error, max_abs_diff(interval_transition_closed(closed_core, wait, n), rec));
            vc.row_error = std::max(vc.row_error, row_sum_error(rec));
        }
        report.cases.push_back(vc);
    }
    for (std::size_t c = 0; c < options.nh_models; ++c) {
        VerifyCase vc{true, options.seed + options.homogeneous_models + c, pick_horizon()};
        const NHSemiMarkovModel model = random_nh_model(vc.seed, options.states, options.period, vc.max_holding);
        const NHCore core = build_nh_core(model);
        NHCore closed_core = core;
        if (options.perturb) {
            for (auto& per_position : closed_core.by_position) detail::nudge(per_position);
        }
        const NHIntervalKernel q = nh_interval_recursive(core, options.nh_horizon);
        for (std::size_t k = 0; k < options.period; ++k) {
            for (long n = 0; n <= options.nh_horizon; ++n) {
                const Matrix& rec = q.at(k, static_cast<std::size_t>(n));
                vc.closed_error = std::max(
                    vc.closed_error, max_abs_diff(nh_interval_closed(closed_core, static_cast<long>(k), n), rec));
                vc.row_error = std::max(vc.row_error, row_sum_error(rec));
            }
        }
        report.cases.push_back(vc);
    }
    return report;
}

}  // namespace semiperiod
