#include <gtest/gtest.h>

#include <semiperiod/semiperiod.hpp>

#include "fixtures.hpp"

namespace semiperiod {
namespace {

using testing::enumerate_kernel;
using testing::enumerate_occupancy;
using testing::fix_three_cycle;
using testing::fix_unif;

// Same model with the coding positions shifted: P'(k) = P(k + shift).
NHSemiMarkovModel rotate(const NHSemiMarkovModel& model, std::size_t shift) {
    std::vector<Matrix> embedded;
    for (std::size_t k = 0; k < model.period(); ++k) embedded.push_back(model.embedded(k + shift));
    return NHSemiMarkovModel(model.states(), embedded, model.holding());
}

TEST(NHModel, ValidatesEveryPosition) {
    std::vector<Matrix> embedded(3, Matrix::Constant(4, 4, 1.0 / 3.0));
    for (auto& p : embedded) p.diagonal().setZero();
    embedded[2](1, 0) = 0.5;
    HoldingTimes h(1, Matrix::Constant(4, 4, 1.0));
    h[0].diagonal().setZero();
    EXPECT_THROW(NHSemiMarkovModel(StateSpace::dna(), embedded, h), ValidationError);
    EXPECT_THROW(NHSemiMarkovModel(StateSpace::dna(), {}, h), ValidationError);
}

TEST(NHModel, PositionsWrapAround) {
    const NHSemiMarkovModel model = random_nh_model(5, 4, 3, 3);
    EXPECT_EQ(model.embedded(4), model.embedded(1));
    EXPECT_EQ(model.at_position(5).embedded(), model.embedded(2));
}

TEST(NHReduction, PeriodOneMatchesHomogeneous) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SemiMarkovModel model = random_model(seed, 4, 5);
        const NHSemiMarkovModel lifted = NHSemiMarkovModel::lift(model, 1);
        const IntervalKernel q = interval_transition_recursive(model, 10);
        const NHIntervalKernel nq = nh_interval_recursive(lifted, 10);
        for (std::size_t n = 0; n <= 10; ++n) {
            EXPECT_LT(max_abs_diff(nq.at(0, n), q.at(n)), 1e-12);
            EXPECT_LT(max_abs_diff(nh_interval_closed(lifted, 0, static_cast<long>(n)), q.at(n)), 1e-12);
        }
        for (auto variant : {ReturnVariant::PaperSurvival, ReturnVariant::ExactEntry}) {
            for (long d = 1; d <= 6; ++d) {
                EXPECT_LT((nh_return_probability(lifted, 0, d, variant) - return_probability(model, d, variant))
                              .cwiseAbs()
                              .maxCoeff(),
                          1e-12);
            }
        }
    }
}

TEST(NHReduction, EqualPositionsMatchHomogeneous) {
    const SemiMarkovModel model = random_model(8, 4, 4);
    const NHSemiMarkovModel lifted = NHSemiMarkovModel::lift(model, 3);
    const IntervalKernel q = interval_transition_recursive(model, 9);
    const NHIntervalKernel nq = nh_interval_recursive(lifted, 9);
    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t n = 0; n <= 9; ++n) {
            EXPECT_LT(max_abs_diff(nq.at(k, n), q.at(n)), 1e-12);
            EXPECT_LT(max_abs_diff(nh_interval_closed(lifted, static_cast<long>(k), static_cast<long>(n)), q.at(n)),
                      1e-12);
        }
        const Vector p = nh_return_probability(lifted, static_cast<long>(k), 3, ReturnVariant::PaperSurvival);
        EXPECT_LT((p - return_probability(model, 3, ReturnVariant::PaperSurvival)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(NHThreeCycle, ReturnsToAAfterOneCodon) {
    const NHSemiMarkovModel model = fix_three_cycle();
    const NHIntervalKernel q = nh_interval_recursive(model, 6);
    EXPECT_EQ(q.at(0, 1)(0, 1), 1.0);  // A -> C
    EXPECT_EQ(q.at(0, 2)(0, 2), 1.0);  // C -> G
    EXPECT_EQ(q.at(0, 3)(0, 0), 1.0);
    EXPECT_EQ(q.at(0, 6)(0, 0), 1.0);
    EXPECT_EQ(nh_interval_closed(model, 0, 3)(0, 0), 1.0);
    EXPECT_EQ(nh_return_probability(model, 0, 3, ReturnVariant::ExactEntry)(0), 1.0);
    EXPECT_EQ(nh_return_probability(model, 0, 3, ReturnVariant::PaperSurvival)(0), 1.0);
}

TEST(NHThreeCycle, PhaseMatters) {
    // Entering A at coding position 1 follows the fallback rows A->C->G->T.
    const NHSemiMarkovModel model = fix_three_cycle();
    const NHIntervalKernel q = nh_interval_recursive(model, 3);
    EXPECT_EQ(q.at(1, 3)(0, 3), 1.0);
    EXPECT_EQ(nh_return_probability(model, 1, 3, ReturnVariant::ExactEntry)(0), 0.0);
}

TEST(NHKernel, RecursionMatchesPathEnumeration) {
    for (std::uint64_t seed = 40; seed < 44; ++seed) {
        const NHSemiMarkovModel model = random_nh_model(seed, 4, 3, 3);
        const NHIntervalKernel q = nh_interval_recursive(model, 5);
        for (std::size_t k = 0; k < 3; ++k) {
            for (std::size_t n = 0; n <= 5; ++n) {
                EXPECT_LT(max_abs_diff(q.at(k, n), enumerate_kernel(model, n, k)), 1e-12)
                    << "seed " << seed << " k " << k << " n " << n;
            }
        }
    }
}

TEST(NHKernel, ClosedEqualsRecursiveOnRandomModels) {
    for (std::uint64_t seed = 200; seed < 210; ++seed) {
        const std::size_t horizon = 1 + seed % 4;
        const NHSemiMarkovModel model = random_nh_model(seed, 4, 3, horizon);
        const NHIntervalKernel q = nh_interval_recursive(model, 12);
        for (long k = 0; k < 3; ++k) {
            for (long n = 0; n <= 12; ++n) {
                const Matrix& rec = q.at(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
                EXPECT_LT(max_abs_diff(nh_interval_closed(model, k, n), rec), 1e-10)
                    << "seed " << seed << " k " << k << " n " << n;
                EXPECT_LT(row_sum_error(rec), 1e-10);
            }
        }
    }
}

TEST(NHKernel, RotationShiftsCodingPosition) {
    const NHSemiMarkovModel model = random_nh_model(77, 4, 3, 4);
    const NHIntervalKernel q = nh_interval_recursive(model, 8);
    for (std::size_t shift = 1; shift < 3; ++shift) {
        const NHIntervalKernel rq = nh_interval_recursive(rotate(model, shift), 8);
        for (std::size_t k = 0; k < 3; ++k) {
            for (std::size_t n = 0; n <= 8; ++n) EXPECT_LT(max_abs_diff(rq.at(k, n), q.at(k + shift, n)), 1e-12);
        }
    }
}

TEST(NHReturn, ExactEntryIsKernelDiagonal) {
    const NHSemiMarkovModel model = random_nh_model(91, 4, 3, 5);
    const NHIntervalKernel q = nh_interval_recursive(model, 7);
    for (long k = 0; k < 3; ++k) {
        for (long d = 1; d <= 7; ++d) {
            const Vector p = nh_return_probability(model, k, d, ReturnVariant::ExactEntry);
            const Vector diag = q.at(static_cast<std::size_t>(k), static_cast<std::size_t>(d)).diagonal();
            EXPECT_LT((p - diag).cwiseAbs().maxCoeff(), 1e-12);
            for (std::size_t i = 0; i < 4; ++i) {
                EXPECT_NEAR(p(static_cast<Eigen::Index>(i)),
                            enumerate_occupancy(model, i, static_cast<std::size_t>(d),
                                                static_cast<std::size_t>(k))(static_cast<Eigen::Index>(i)),
                            1e-12);
            }
        }
    }
}

TEST(NHReturn, UniformLiftIsQuarter) {
    const NHSemiMarkovModel model = NHSemiMarkovModel::lift(fix_unif(), 3);
    for (long k = 0; k < 3; ++k) {
        const Vector p = nh_return_probability(model, k, 3, ReturnVariant::ExactEntry);
        for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(p(i), 0.25, 1e-6);
    }
}

TEST(NHReturn, AgreesWithMonteCarlo) {
    const NHSemiMarkovModel model = random_nh_model(12, 4, 3, 4);
    for (std::size_t k = 0; k < 3; ++k) {
        const Vector exact = nh_return_probability(model, static_cast<long>(k), 3, ReturnVariant::ExactEntry);
        const MonteCarloEstimate mc = mc_return_probability(model, 3, 100000, 500 + k, k);
        for (Eigen::Index i = 0; i < 4; ++i) {
            EXPECT_LE(std::abs(exact(i) - mc.estimate(i)), 3.0 * mc.standard_error(i) + 1e-12)
                << "k " << k << " state " << i;
        }
    }
}

TEST(NHReturn, ArgumentErrors) {
    const NHSemiMarkovModel model = fix_three_cycle();
    EXPECT_THROW(nh_interval_closed(model, 3, 2), ArgumentError);
    EXPECT_THROW(nh_interval_closed(model, -1, 2), ArgumentError);
    EXPECT_THROW(nh_return_probability(model, 0, 0, ReturnVariant::ExactEntry), ArgumentError);
    const NHCore core = build_nh_core(model);
    EXPECT_THROW(nh_return_probability(core, nh_interval_recursive(core, 1), 0, 4, ReturnVariant::ExactEntry),
                 ArgumentError);
}

}  // namespace
}  // namespace semiperiod
