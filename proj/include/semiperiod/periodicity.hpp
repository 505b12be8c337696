#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "estimation.hpp"
#include "kernel.hpp"
#include "matrix.hpp"
#include "model.hpp"
#include "nh_kernel.hpp"
#include "sequence.hpp"

namespace semiperiod {

/// One cycle of a profile. `log_step` is the log of the factor this cycle
/// multiplied in (for cycle 1 it equals log_p).
struct CycleRecord {
    Vector log_p;
    Vector log_step;
    std::vector<std::optional<double>> ratio;
    std::size_t model_ref = 0;
};

/// log p_i(k, n, d) over cycles n = 1.. (element n-1), for one coding position.
struct CycleProfile {
    StateSpace states;
    std::size_t d = 3;
    std::size_t period = 1;
    std::size_t position = 0;
    std::vector<CycleRecord> cycles;

    std::size_t size() const noexcept { return cycles.size(); }
    const CycleRecord& cycle(std::size_t n) const { return cycles.at(n - 1); }

    /// Multiply the running probabilities by `factor` (the first call sets the
    /// initial condition). Accumulation happens in log space.
    void append(const Vector& factor, std::size_t model_ref) {
        CycleRecord rec;
        rec.log_step = factor.unaryExpr([](double v) { return std::log(v); });
        rec.log_p = cycles.empty() ? rec.log_step : Vector(cycles.back().log_p + rec.log_step);
        rec.model_ref = model_ref;
        cycles.push_back(std::move(rec));
    }
};

/// Homogeneous profile with one fixed model: every cycle multiplies by p_i(d).
inline CycleProfile cycle_probabilities(const SemiMarkovModel& model, long d, long n_max, ReturnVariant variant) {
    if (d < 1) throw ArgumentError("cycle length d must be at least 1, got " + std::to_string(d));
    if (n_max < 1) throw ArgumentError("cycle count must be at least 1, got " + std::to_string(n_max));
    const Vector factor = return_probability(model, d, variant);
    CycleProfile out{model.states(), static_cast<std::size_t>(d), 1, 0, {}};
    out.cycles.reserve(static_cast<std::size_t>(n_max));
    for (long n = 1; n <= n_max; ++n) out.append(factor, 0);
    return out;
}

/// The per-cycle factor p_i(k, d) of one NH model.
inline Vector nh_cycle_factor(const NHSemiMarkovModel& model, std::size_t k, long d, ReturnVariant variant) {
    const NHCore core = build_nh_core(model);
    return nh_return_probability(core, nh_interval_recursive(core, d - 1), static_cast<long>(k), d, variant);
}

/// P(k,1,d) from models[0]; cycle n multiplies by the factor of models[n-1].
/// A single-element span is reused for every cycle of `cycles` (default 1).
inline CycleProfile nh_cycle_probabilities(std::span<const NHSemiMarkovModel> models, long k, long d,
                                           ReturnVariant variant, std::size_t cycles = 0) {
    if (models.empty()) throw ArgumentError("no models supplied for the cycle profile");
    if (d < 1) throw ArgumentError("cycle length d must be at least 1, got " + std::to_string(d));
    const std::size_t s = models.front().period();
    if (k < 0 || static_cast<std::size_t>(k) >= s) {
        throw ArgumentError("coding position " + std::to_string(k) + " outside [0," + std::to_string(s) + ")");
    }
    if (cycles == 0) cycles = models.size();
    if (models.size() != 1 && cycles != models.size()) {
        throw ArgumentError("one model per cycle required");
    }
    CycleProfile out{models.front().states(), static_cast<std::size_t>(d), s, static_cast<std::size_t>(k), {}};
    out.cycles.reserve(cycles);
    if (models.size() == 1) {
        const Vector factor = nh_cycle_factor(models.front(), static_cast<std::size_t>(k), d, variant);
        for (std::size_t n = 0; n < cycles; ++n) out.append(factor, 0);
        return out;
    }
    for (std::size_t n = 0; n < cycles; ++n) {
        out.append(nh_cycle_factor(models[n], static_cast<std::size_t>(k), d, variant), n);
    }
    return out;
}

/// R_i(n) = p_i(n) / p_i(n-1) for n >= 2, via the stored log increments.
/// Absent where p_i(n-1) has underflowed to zero.
inline CycleProfile ratio_series(CycleProfile profile) {
    if (profile.size() < 2) throw ArgumentError("ratio series needs at least 2 cycles");
    const auto n_states = static_cast<std::size_t>(profile.cycles.front().log_p.size());
    profile.cycles.front().ratio.assign(n_states, std::nullopt);
    for (std::size_t n = 1; n < profile.size(); ++n) {
        const CycleRecord& prev = profile.cycles[n - 1];
        CycleRecord& cur = profile.cycles[n];
        cur.ratio.assign(n_states, std::nullopt);
        for (std::size_t i = 0; i < n_states; ++i) {
            const auto idx = static_cast<Eigen::Index>(i);
            if (!std::isfinite(prev.log_p(idx))) continue;
            cur.ratio[i] = std::exp(cur.log_step(idx));
        }
    }
    return profile;
}

enum class RegionColor { None, Green, Red };

inline std::string_view to_string(RegionColor c) {
    switch (c) {
        case RegionColor::Green: return "GREEN";
        case RegionColor::Red: return "RED";
        case RegionColor::None: return "";
    }
    return "";
}

struct ColorRun {
    RegionColor color = RegionColor::None;
    std::size_t first_cycle = 0;
    std::size_t last_cycle = 0;
};

/// Colors of one state's ratio series. colors[n-1] is cycle n; cycles 1 and 2
/// have no predecessor ratio and stay uncolored.
struct RegionAnnotation {
    std::size_t state = 0;
    std::vector<RegionColor> colors;
    std::vector<ColorRun> runs;

    RegionColor at(std::size_t cycle) const { return colors.at(cycle - 1); }
};

/// GREEN where R(n) >= R(n-1) (ties are GREEN), RED where it drops.
inline RegionAnnotation color_regions(const CycleProfile& profile, char state) {
    const auto idx = profile.states.find(state);
    if (!idx) throw ArgumentError(std::string("state '") + state + "' is not in alphabet " + profile.states.symbols());
    if (profile.size() < 3) throw ArgumentError("coloring needs at least 3 cycles");
    RegionAnnotation out;
    out.state = *idx;
    out.colors.assign(profile.size(), RegionColor::None);
    for (std::size_t n = 3; n <= profile.size(); ++n) {
        const auto& prev = profile.cycle(n - 1).ratio;
        const auto& cur = profile.cycle(n).ratio;
        if (prev.size() <= *idx || cur.size() <= *idx) {
            throw ArgumentError("profile has no ratio series; run ratio_series first");
        }
        if (!prev[*idx] || !cur[*idx]) continue;
        out.colors[n - 1] = *cur[*idx] >= *prev[*idx] ? RegionColor::Green : RegionColor::Red;
    }
    for (std::size_t n = 1; n <= out.colors.size(); ++n) {
        RegionColor c = out.colors[n - 1];
        if (c == RegionColor::None) continue;
        if (!out.runs.empty() && out.runs.back().color == c && out.runs.back().last_cycle + 1 == n) {
            out.runs.back().last_cycle = n;
        } else {
            out.runs.push_back({c, n, n});
        }
    }
    return out;
}

struct AnalysisOptions {
    long d = 3;
    EstimationConfig estimation{};
    ReturnVariant variant = ReturnVariant::PaperSurvival;
    std::size_t warmup_cycles = kDefaultWarmupCycles;
};

/// Full result: one profile per coding position and one annotation per
/// (coding position, state).
struct AnalysisResult {
    AnalysisOptions options;
    std::vector<CycleProfile> profiles;
    std::vector<std::vector<RegionAnnotation>> regions;
};

/// Profile for coding position k from rolling estimates. Cycle n > warm-up is
/// re-estimated on the first n*d + k + 1 symbols (the 1-based coding position
/// added to the cycle end).
inline CycleProfile rolling_profile(const SymbolSequence& seq, std::size_t k, const AnalysisOptions& options) {
    CycleProfile profile{seq.states, static_cast<std::size_t>(options.d), options.estimation.period, k, {}};
    for_each_rolling_model(seq, options.d, options.estimation, options.warmup_cycles, k + 1,
                           [&](std::size_t n, const NHSemiMarkovModel& model) {
                               profile.append(nh_cycle_factor(model, k, options.d, options.variant), n - 1);
                           });
    return profile;
}

inline AnalysisResult analyze_sequence(const SymbolSequence& seq, const AnalysisOptions& options) {
    options.estimation.validate();
    if (options.d < 1) throw ArgumentError("cycle length d must be at least 1, got " + std::to_string(options.d));
    AnalysisResult out{options, {}, {}};
    for (std::size_t k = 0; k < options.estimation.period; ++k) {
        CycleProfile profile = rolling_profile(seq, k, options);
        if (profile.size() >= 2) profile = ratio_series(std::move(profile));
        std::vector<RegionAnnotation> per_state;
        if (profile.size() >= 3) {
            for (char symbol : seq.states.symbols()) per_state.push_back(color_regions(profile, symbol));
        }
        out.profiles.push_back(std::move(profile));
        out.regions.push_back(std::move(per_state));
    }
    return out;
}

}  // namespace semiperiod
