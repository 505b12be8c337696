#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <semiperiod/semiperiod.hpp>

namespace semiperiod::testing {

/// Two states A,B; A always holds 1 then jumps to B, B holds 2 then jumps to A.
/// Entered at A the chain reads ABBABBABB...
inline SemiMarkovModel fix_det() {
    Matrix p(2, 2);
    p << 0, 1, 1, 0;
    HoldingTimes h(2, Matrix::Zero(2, 2));
    h[0](0, 1) = 1.0;  // h_AB(1)
    h[1](1, 0) = 1.0;  // h_BA(2)
    return SemiMarkovModel(StateSpace("AB"), p, h);
}

/// Four states with p_ij = 1/3 off the diagonal and geometric holding times
/// (exit probability 3/4 per position), truncated at 30 and renormalized.
/// Up to the 4^-30 truncation this generates an i.i.d. uniform sequence.
inline SemiMarkovModel fix_unif(std::size_t max_holding = 30) {
    Matrix p = Matrix::Constant(4, 4, 1.0 / 3.0);
    p.diagonal().setZero();
    HoldingTimes raw(2 * max_holding, Matrix::Zero(4, 4));
    for (std::size_t m = 1; m <= raw.size(); ++m) {
        Matrix hm = Matrix::Constant(4, 4, 0.75 * std::pow(0.25, static_cast<double>(m - 1)));
        hm.diagonal().setZero();
        raw[m - 1] = hm;
    }
    return SemiMarkovModel(StateSpace::dna(), p, truncate_holding(raw, max_holding));
}

/// s = 3 chain over ACGT cycling A -> C -> G -> A with every sojourn of length
/// 1; P(k) only carries the transition that occurs at coding position k.
inline NHSemiMarkovModel fix_three_cycle() {
    std::vector<Matrix> embedded(3, Matrix::Zero(4, 4));
    // Rows that never occur at a coding position still need a valid law: use a
    // fixed off-diagonal jump.
    for (auto& p : embedded) {
        for (Eigen::Index i = 0; i < 4; ++i) p(i, (i + 1) % 4) = 1.0;
    }
    embedded[0].row(0).setZero();
    embedded[0](0, 1) = 1.0;  // A -> C at k = 0
    embedded[1].row(1).setZero();
    embedded[1](1, 2) = 1.0;  // C -> G at k = 1
    embedded[2].row(2).setZero();
    embedded[2](2, 0) = 1.0;  // G -> A at k = 2
    HoldingTimes h(1, Matrix::Constant(4, 4, 1.0));
    h[0].diagonal().setZero();
    return NHSemiMarkovModel(StateSpace::dna(), embedded, h);
}

namespace detail {

inline void walk_paths(const NHSemiMarkovModel& model, std::size_t state, std::size_t entry, std::size_t phase0,
                       std::size_t horizon, double weight, Vector& out) {
    const Matrix& p = model.embedded((phase0 + entry) % model.period());
    for (std::size_t next = 0; next < model.size(); ++next) {
        const double pij = p(static_cast<Eigen::Index>(state), static_cast<Eigen::Index>(next));
        if (pij == 0.0) continue;
        for (std::size_t m = 1; m <= model.max_holding(); ++m) {
            const double w = pij * model.holding()[m - 1](static_cast<Eigen::Index>(state),
                                                          static_cast<Eigen::Index>(next));
            if (w == 0.0) continue;
            if (entry + m > horizon) {
                out(static_cast<Eigen::Index>(state)) += weight * w;
            } else {
                walk_paths(model, next, entry + m, phase0, horizon, weight * w, out);
            }
        }
    }
}

}  // namespace detail

/// Exact occupancy distribution at position `horizon` after entering `state`
/// at position 0 (coding position `phase`), by summing over every jump path.
inline Vector enumerate_occupancy(const NHSemiMarkovModel& model, std::size_t state, std::size_t horizon,
                                  std::size_t phase = 0) {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(model.size()));
    if (horizon == 0) {
        out(static_cast<Eigen::Index>(state)) = 1.0;
        return out;
    }
    detail::walk_paths(model, state, 0, phase, horizon, 1.0, out);
    return out;
}

inline Matrix enumerate_kernel(const NHSemiMarkovModel& model, std::size_t horizon, std::size_t phase = 0) {
    const auto n = static_cast<Eigen::Index>(model.size());
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.row(i) = enumerate_occupancy(model, static_cast<std::size_t>(i), horizon, phase).transpose();
    }
    return out;
}

inline Matrix enumerate_kernel(const SemiMarkovModel& model, std::size_t horizon) {
    return enumerate_kernel(NHSemiMarkovModel::lift(model, 1), horizon);
}

}  // namespace semiperiod::testing
