#pragma once

// Serialization of analysis results and models (CSV and JSON). Kept out of the
// umbrella header because it pulls in nlohmann/json.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "estimation.hpp"
#include "kernel.hpp"
#include "nh_kernel.hpp"
#include "periodicity.hpp"
#include "random.hpp"
#include "sequence.hpp"

namespace semiperiod {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kCsvHeader = "state,k,cycle,p,logp,R,color";

/// Everything needed to rerun an analysis. Coding positions and cycles are
/// 1-based here, as at every external interface.
struct ReportMetadata {
    std::string input;
    std::size_t length = 0;
    std::string alphabet = "ACGT";
    long d = 3;
    std::size_t period = 3;
    std::string variant = "paper-survival";
    std::size_t warmup_cycles = kDefaultWarmupCycles;
    std::size_t max_holding = kDefaultMaxHolding;
    std::string zero_row_policy = "uniform-offdiagonal";
    bool drop_censored_final_run = true;
    std::string holding_estimator = "mle";
    std::optional<std::uint64_t> generator_seed;
    std::string generator;

    std::vector<std::pair<std::string, std::string>> entries() const {
        std::vector<std::pair<std::string, std::string>> out{
            {"schema_version", std::to_string(kReportSchemaVersion)},
            {"input", input},
            {"length", std::to_string(length)},
            {"alphabet", alphabet},
            {"d", std::to_string(d)},
            {"s", std::to_string(period)},
            {"variant", variant},
            {"warmup", std::to_string(warmup_cycles)},
            {"max_holding", std::to_string(max_holding)},
            {"zero_row_policy", zero_row_policy},
            {"drop_censored_final_run", drop_censored_final_run ? "true" : "false"},
            {"holding_estimator", holding_estimator},
        };
        if (generator_seed) out.emplace_back("generator_seed", std::to_string(*generator_seed));
        if (!generator.empty()) out.emplace_back("generator", generator);
        return out;
    }
};

/// Pull "seed=<n>" and the generator description out of a FASTA header
/// written by the generate command.
inline void read_generator_header(const std::string& header, ReportMetadata& meta) {
    std::istringstream words(header);
    std::string word;
    bool first = true;
    bool ours = false;
    while (words >> word) {
        if (first) {
            ours = word == "uniform" || word == "periodic" || word == "embedded";
            first = false;
        }
        if (word.rfind("seed=", 0) == 0) {
            try {
                meta.generator_seed = std::stoull(word.substr(5));
            } catch (const std::logic_error&) {
            }
        }
    }
    if (ours) meta.generator = header;
}

inline ReportMetadata make_metadata(const SymbolSequence& seq, const AnalysisOptions& options) {
    ReportMetadata meta;
    meta.input = seq.name;
    meta.length = seq.size();
    meta.alphabet = seq.states.symbols();
    meta.d = options.d;
    meta.period = options.estimation.period;
    meta.variant = std::string(to_string(options.variant));
    meta.warmup_cycles = options.warmup_cycles;
    meta.max_holding = options.estimation.max_holding;
    meta.zero_row_policy =
        options.estimation.zero_row_policy == ZeroRowPolicy::Error ? "error" : "uniform-offdiagonal";
    meta.drop_censored_final_run = options.estimation.drop_censored_final_run;
    meta.holding_estimator = std::string(to_string(options.estimation.holding_estimator));
    read_generator_header(seq.name, meta);
    return meta;
}

namespace detail {

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    std::ostringstream out;
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return out.str();
}

inline nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace detail

/// One row per (state, coding position, cycle), in that nesting order.
struct ReportRow {
    char state;
    std::size_t k;      ///< 1-based
    std::size_t cycle;  ///< 1-based
    double log_p;
    std::optional<double> ratio;
    RegionColor color;
};

inline std::vector<ReportRow> report_rows(const AnalysisResult& result) {
    std::vector<ReportRow> rows;
    if (result.profiles.empty()) return rows;
    const StateSpace& states = result.profiles.front().states;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t k = 0; k < result.profiles.size(); ++k) {
            const CycleProfile& profile = result.profiles[k];
            const auto& regions = result.regions[k];
            for (std::size_t n = 1; n <= profile.size(); ++n) {
                const CycleRecord& rec = profile.cycle(n);
                ReportRow row{states.symbol(i), k + 1, n, rec.log_p(static_cast<Eigen::Index>(i)), std::nullopt,
                              RegionColor::None};
                if (i < rec.ratio.size()) row.ratio = rec.ratio[i];
                if (i < regions.size()) row.color = regions[i].at(n);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

/// CSV with `# key=value` metadata lines ahead of the header row.
inline void write_csv(std::ostream& out, const AnalysisResult& result, const ReportMetadata& meta) {
    for (const auto& [key, value] : meta.entries()) out << "# " << key << '=' << value << '\n';
    out << kCsvHeader << '\n';
    for (const ReportRow& row : report_rows(result)) {
        out << row.state << ',' << row.k << ',' << row.cycle << ',' << detail::format_number(std::exp(row.log_p))
            << ',' << detail::format_number(row.log_p) << ','
            << (row.ratio ? detail::format_number(*row.ratio) : std::string()) << ',' << to_string(row.color)
            << '\n';
    }
}

inline nlohmann::json metadata_json(const ReportMetadata& meta) {
    nlohmann::json j = {
        {"input", meta.input},
        {"length", meta.length},
        {"alphabet", meta.alphabet},
        {"d", meta.d},
        {"s", meta.period},
        {"variant", meta.variant},
        {"warmup", meta.warmup_cycles},
        {"max_holding", meta.max_holding},
        {"zero_row_policy", meta.zero_row_policy},
        {"drop_censored_final_run", meta.drop_censored_final_run},
        {"holding_estimator", meta.holding_estimator},
    };
    if (meta.generator_seed) j["generator_seed"] = *meta.generator_seed;
    if (!meta.generator.empty()) j["generator"] = meta.generator;
    return j;
}

/// Region runs flattened over (state, coding position).
inline nlohmann::json regions_json(const AnalysisResult& result) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t k = 0; k < result.regions.size(); ++k) {
        const StateSpace& states = result.profiles[k].states;
        for (const RegionAnnotation& ann : result.regions[k]) {
            for (const ColorRun& run : ann.runs) {
                out.push_back({{"state", std::string(1, states.symbol(ann.state))},
                               {"k", k + 1},
                               {"color", to_string(run.color)},
                               {"first_cycle", run.first_cycle},
                               {"last_cycle", run.last_cycle}});
            }
        }
    }
    return out;
}

/// JSON mirror of the CSV table plus the merged color runs.
inline nlohmann::json report_json(const AnalysisResult& result, const ReportMetadata& meta) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ReportRow& row : report_rows(result)) {
        nlohmann::json r = {{"state", std::string(1, row.state)},
                            {"k", row.k},
                            {"cycle", row.cycle},
                            {"p", detail::json_number(std::exp(row.log_p))},
                            {"logp", detail::json_number(row.log_p)},
                            {"R", row.ratio ? detail::json_number(*row.ratio) : nlohmann::json(nullptr)},
                            {"color", row.color == RegionColor::None ? nlohmann::json(nullptr)
                                                                     : nlohmann::json(to_string(row.color))}};
        rows.push_back(std::move(r));
    }
    return {{"schema_version", kReportSchemaVersion},
            {"metadata", metadata_json(meta)},
            {"rows", std::move(rows)},
            {"regions", regions_json(result)}};
}

inline nlohmann::json matrix_json(const Matrix& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

inline nlohmann::json vector_json(const Vector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(detail::json_number(v(i)));
    return out;
}

/// Model dump: P(k) for each coding position, H(m), and optionally the first
/// cycle return probabilities and interval kernels.
inline nlohmann::json model_json(const NHSemiMarkovModel& model, std::optional<long> d = std::nullopt,
                                 std::optional<long> kernel_horizon = std::nullopt) {
    nlohmann::json embedded = nlohmann::json::array();
    for (const Matrix& p : model.embedded_all()) embedded.push_back(matrix_json(p));
    nlohmann::json holding = nlohmann::json::array();
    for (const Matrix& h : model.holding()) holding.push_back(matrix_json(h));
    nlohmann::json out = {{"schema_version", kReportSchemaVersion},
                          {"alphabet", model.states().symbols()},
                          {"s", model.period()},
                          {"max_holding", model.max_holding()},
                          {"P", std::move(embedded)},
                          {"H", std::move(holding)}};
    const NHCore core = build_nh_core(model);
    if (d) {
        const NHIntervalKernel q = nh_interval_recursive(core, *d - 1);
        nlohmann::json survival = nlohmann::json::array();
        nlohmann::json exact = nlohmann::json::array();
        for (std::size_t k = 0; k < model.period(); ++k) {
            survival.push_back(vector_json(
                nh_return_probability(core, q, static_cast<long>(k), *d, ReturnVariant::PaperSurvival)));
            exact.push_back(
                vector_json(nh_return_probability(core, q, static_cast<long>(k), *d, ReturnVariant::ExactEntry)));
        }
        out["return_probability"] = {{"d", *d}, {"paper-survival", survival}, {"exact-entry", exact}};
    }
    if (kernel_horizon) {
        const NHIntervalKernel q = nh_interval_recursive(core, *kernel_horizon);
        nlohmann::json kernels = nlohmann::json::array();
        for (std::size_t k = 0; k < model.period(); ++k) {
            nlohmann::json per_n = nlohmann::json::array();
            for (std::size_t n = 0; n <= q.horizon(); ++n) per_n.push_back(matrix_json(q.at(k, n)));
            kernels.push_back(std::move(per_n));
        }
        out["Q"] = std::move(kernels);
    }
    return out;
}

}  // namespace semiperiod
