#include <gtest/gtest.h>

#include <string>

#include <semiperiod/semiperiod.hpp>

#include "fixtures.hpp"

namespace semiperiod {
namespace {

using testing::fix_det;
using testing::fix_unif;

EstimationConfig config_with(std::size_t period, std::size_t max_holding = kDefaultMaxHolding) {
    EstimationConfig c;
    c.period = period;
    c.max_holding = max_holding;
    return c;
}

double max_holding_error(const HoldingTimes& a, const HoldingTimes& b) {
    double worst = 0.0;
    const std::size_t horizon = std::max(a.size(), b.size());
    for (std::size_t m = 0; m < horizon; ++m) {
        const Matrix& x = m < a.size() ? a[m] : Matrix::Zero(a[0].rows(), a[0].cols()).eval();
        const Matrix& y = m < b.size() ? b[m] : Matrix::Zero(b[0].rows(), b[0].cols()).eval();
        worst = std::max(worst, max_abs_diff(x, y));
    }
    return worst;
}

TEST(ExtractRuns, SplitsMaximalRuns) {
    const RunLengthEncoding rle = extract_runs(make_sequence("AAACGT"));
    const std::vector<semiperiod::Run> expected{{0, 3, 0}, {1, 1, 3}, {2, 1, 4}, {3, 1, 5}};
    EXPECT_EQ(rle.runs, expected);
    EXPECT_TRUE(rle.last_censored);
}

TEST(ExtractRuns, SingleSymbolAndAlternation) {
    EXPECT_EQ(extract_runs(make_sequence("A")).runs, (std::vector<semiperiod::Run>{{0, 1, 0}}));
    const StateSpace ab("AB");
    const std::vector<semiperiod::Run> expected{{0, 1, 0}, {1, 2, 1}, {0, 1, 3}, {1, 2, 4}};
    EXPECT_EQ(extract_runs(make_sequence("ABBABB", ab)).runs, expected);
    EXPECT_THROW(extract_runs(make_sequence("")), ArgumentError);
}

TEST(ExtractRuns, LengthsCoverTheSequence) {
    GeneratorSpec spec;
    spec.length = 5000;
    spec.seed = 4;
    const SymbolSequence seq = generate(spec);
    const RunLengthEncoding rle = extract_runs(seq);
    std::size_t total = 0;
    for (std::size_t r = 0; r < rle.runs.size(); ++r) {
        EXPECT_EQ(rle.runs[r].start, total);
        if (r > 0) {
            EXPECT_NE(rle.runs[r].state, rle.runs[r - 1].state);
        }
        total += rle.runs[r].length;
    }
    EXPECT_EQ(total, seq.size());
}

TEST(TransitionCounts, ConservedAcrossPositionsAndDurations) {
    GeneratorSpec spec;
    spec.length = 3000;
    spec.seed = 6;
    const RunLengthEncoding rle = extract_runs(generate(spec));
    const TransitionCounts counts = count_transitions(rle, 4, 3, 5);
    double by_position = 0.0;
    for (std::size_t k = 0; k < 3; ++k) by_position += counts.transitions(k).sum();
    double by_duration = counts.overflow().sum();
    for (std::size_t m = 1; m <= 5; ++m) by_duration += counts.durations(m).sum();
    const auto completed = static_cast<double>(rle.runs.size() - 1);
    EXPECT_EQ(by_position, completed);
    EXPECT_EQ(by_duration, completed);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(counts.transitions(k).diagonal().sum(), 0.0);
}

TEST(EstimateNH, AttributesTransitionsToRunStart) {
    const NHSemiMarkovModel model = estimate_nh(make_sequence("AAACGT"), config_with(3));
    EXPECT_EQ(model.embedded(0)(0, 1), 1.0);  // A -> C, run starts at 0
    EXPECT_EQ(model.embedded(0)(1, 2), 1.0);  // C -> G, run starts at 3
    EXPECT_EQ(model.embedded(1)(2, 3), 1.0);  // G -> T, run starts at 4
    EXPECT_EQ(model.holding(3)(0, 1), 1.0);
    EXPECT_EQ(model.holding(1)(1, 2), 1.0);
    // Rows never exited at a position fall back to uniform off-diagonal.
    EXPECT_NEAR(model.embedded(2)(0, 3), 1.0 / 3.0, 1e-15);
}

TEST(EstimateNH, CodonCycle) {
    std::string text;
    for (int i = 0; i < 10; ++i) text += "ACG";
    const NHSemiMarkovModel model = estimate_nh(make_sequence(text), config_with(3));
    EXPECT_EQ(model.embedded(0)(0, 1), 1.0);
    EXPECT_EQ(model.embedded(1)(1, 2), 1.0);
    EXPECT_EQ(model.embedded(2)(2, 0), 1.0);
    EXPECT_EQ(model.holding(1)(0, 1), 1.0);
    EXPECT_EQ(nh_return_probability(model, 0, 3, ReturnVariant::ExactEntry)(0), 1.0);
}

TEST(EstimateNH, ZeroRowPolicy) {
    EstimationConfig strict = config_with(1);
    strict.zero_row_policy = ZeroRowPolicy::Error;
    try {
        estimate_nh(make_sequence("AAACCCAAAG"), strict);
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("state G is never exited"), std::string::npos) << e.what();
    }
    EXPECT_NO_THROW(estimate_nh(make_sequence("AAACCCAAAG"), config_with(1)));
}

TEST(EstimateNH, LongSojournsGoToTheLastSupportedLength) {
    const NHSemiMarkovModel model = estimate_nh(make_sequence("AAAAAAC"), config_with(1, 4));
    EXPECT_EQ(model.holding(4)(0, 1), 1.0);
}

TEST(EstimateNH, CensoredFinalRun) {
    EstimationConfig keep = config_with(1, 5);
    keep.drop_censored_final_run = false;
    // One completed A->C sojourn of 1 and a censored final A run of 3.
    const NHSemiMarkovModel model = estimate_nh(make_sequence("ACAAA"), keep);
    EXPECT_DOUBLE_EQ(model.holding(1)(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(model.holding(3)(0, 1), 0.5);
    EXPECT_EQ(model.embedded(0)(0, 1), 1.0);
    const NHSemiMarkovModel dropped = estimate_nh(make_sequence("ACAAA"), config_with(1, 5));
    EXPECT_EQ(dropped.holding(1)(0, 1), 1.0);
}

TEST(EstimateHomogeneous, RecoversDeterministicFixtureExactly) {
    const SymbolSequence seq = simulate_smc(fix_det(), 3000, 1);
    const SemiMarkovModel model = estimate_homogeneous(seq, config_with(3, 2));
    EXPECT_EQ(model.embedded(), fix_det().embedded());
    EXPECT_EQ(max_holding_error(model.holding(), fix_det().holding()), 0.0);
}

TEST(EstimateHomogeneous, DestinationRatioEstimatorIsAvailable) {
    EstimationConfig c = config_with(1, 2);
    c.holding_estimator = HoldingEstimator::DestinationRatio;
    const SemiMarkovModel model = estimate_homogeneous(simulate_smc(fix_det(), 300, 2), c);
    EXPECT_EQ(model.holding(1)(0, 1), 1.0);
    EXPECT_EQ(model.holding(2)(1, 0), 1.0);
    EXPECT_EQ(parse_holding_estimator("destination-ratio"), HoldingEstimator::DestinationRatio);
    EXPECT_THROW(parse_holding_estimator("ratio"), ArgumentError);
}

TEST(EstimateHomogeneous, RoundTripOnUniformFixture) {
    const SemiMarkovModel truth = fix_unif();
    const SemiMarkovModel fitted = estimate_homogeneous(simulate_smc(truth, 100000, 17), config_with(1));
    EXPECT_LT(max_abs_diff(fitted.embedded(), truth.embedded()), 0.05);
    EXPECT_LT(max_holding_error(fitted.holding(), truth.holding()), 0.05);
}

TEST(Rolling, PrefixModelEqualsDirectEstimate) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Periodic;
    spec.length = 600;
    spec.seed = 8;
    const SymbolSequence seq = generate(spec);
    RollingEstimator rolling(seq, config_with(3));
    for (std::size_t length : {1u, 2u, 30u, 31u, 100u, 257u, 600u}) {
        const NHSemiMarkovModel a = rolling.model_for_prefix(length);
        const NHSemiMarkovModel b = estimate_nh(seq.prefix(length), config_with(3));
        for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(a.embedded(k), b.embedded(k)) << "length " << length;
        EXPECT_EQ(max_holding_error(a.holding(), b.holding()), 0.0) << "length " << length;
    }
    EXPECT_THROW(rolling.model_for_prefix(599), ArgumentError);
    EXPECT_THROW(rolling.model_for_prefix(601), ArgumentError);
}

TEST(Rolling, WarmupCyclesShareOneModel) {
    GeneratorSpec spec;
    spec.length = 300;
    spec.seed = 3;
    const SymbolSequence seq = generate(spec);
    const std::vector<NHSemiMarkovModel> models = rolling_estimate(seq, 3, config_with(3), 10, 1);
    ASSERT_EQ(models.size(), 100u);
    const NHSemiMarkovModel warm = estimate_nh(seq.prefix(30), config_with(3));
    for (std::size_t n = 0; n < 10; ++n) {
        for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(models[n].embedded(k), warm.embedded(k));
    }
    // Cycle 11 is re-estimated on the first 11*3 + 1 symbols.
    const NHSemiMarkovModel eleventh = estimate_nh(seq.prefix(34), config_with(3));
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(models[10].embedded(k), eleventh.embedded(k));
    // The final cycle is clamped to the sequence.
    const NHSemiMarkovModel last = estimate_nh(seq, config_with(3));
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(models.back().embedded(k), last.embedded(k));
}

TEST(Rolling, RejectsSequencesShorterThanWarmup) {
    const SymbolSequence seq = make_sequence(std::string(29, 'A'));
    try {
        rolling_estimate(seq, 3, config_with(3));
        FAIL() << "expected an argument error";
    } catch (const ArgumentError& e) {
        EXPECT_NE(std::string(e.what()).find("need at least 30 symbols"), std::string::npos) << e.what();
    }
    EXPECT_NO_THROW(rolling_estimate(make_sequence(std::string(30, 'A')), 3, config_with(3)));
}

TEST(Rolling, ConvergesTowardTheGeneratingModel) {
    const SemiMarkovModel truth = fix_unif();
    const SymbolSequence seq = simulate_smc(truth, 30000, 23);
    const std::vector<NHSemiMarkovModel> models = rolling_estimate(seq, 3, config_with(1));
    const double early = max_abs_diff(models[10].embedded(0), truth.embedded());
    const double late = max_abs_diff(models.back().embedded(0), truth.embedded());
    EXPECT_LT(late, early);
    EXPECT_LT(late, 0.03);
}

TEST(EstimateNH, EmbeddedLetterRaisesReturnsToA) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Embedded;
    spec.length = 30000;
    spec.intervals = {{1, 30000}};
    spec.seed = 12;
    const SymbolSequence seq = generate(spec);
    const NHSemiMarkovModel model = estimate_nh(seq, config_with(3));
    const Vector on_phase = nh_return_probability(model, 0, 3, ReturnVariant::ExactEntry);
    const Vector off_phase = nh_return_probability(model, 1, 3, ReturnVariant::ExactEntry);
    EXPECT_GT(on_phase(0), 0.5);
    EXPECT_GT(on_phase(0), off_phase(0) + 0.2);
    for (Eigen::Index i = 1; i < 4; ++i) EXPECT_LT(on_phase(i), on_phase(0));
}

}  // namespace
}  // namespace semiperiod
