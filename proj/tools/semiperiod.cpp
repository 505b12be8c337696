// semiperiod: generate synthetic sequences, estimate semi-Markov models,
// compute d-periodicity profiles and flag periodic regions.
//
// Exit codes: 0 success, 1 usage/validation/format error, 2 internal invariant
// violation (including a failed `verify`).

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <semiperiod/report.hpp>
#include <semiperiod/semiperiod.hpp>
#include <semiperiod/verify.hpp>

namespace sp = semiperiod;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInvariant = 2;

struct SequenceInput {
    std::string path = "-";
    std::string format = "auto";
    std::string unknown = "skip";
    std::string alphabet = "ACGT";
    std::optional<std::size_t> record;

    void attach(CLI::App* cmd) {
        cmd->add_option("input", path, "Sequence file (FASTA or plain), '-' for stdin")->required();
        cmd->add_option("--input-format", format, "Input format")
            ->check(CLI::IsMember({"auto", "fasta", "plain"}))
            ->capture_default_str();
        cmd->add_option("--unknown", unknown, "Symbols outside the alphabet")
            ->check(CLI::IsMember({"skip", "error"}))
            ->capture_default_str();
        cmd->add_option("--record", record, "1-based FASTA record to use (default: first)");
        cmd->add_option("--alphabet", alphabet, "State symbols in matrix order")->capture_default_str();
    }

    sp::SymbolSequence read() const {
        sp::ReadOptions opts;
        opts.format = format == "fasta" ? sp::SequenceFormat::Fasta
                      : format == "plain" ? sp::SequenceFormat::Plain
                                          : sp::SequenceFormat::Auto;
        opts.policy = unknown == "error" ? sp::UnknownSymbolPolicy::Error : sp::UnknownSymbolPolicy::Skip;
        opts.record_index = record;
        const sp::StateSpace states(alphabet);
        if (path == "-") {
            sp::SymbolSequence seq = sp::read_sequence(std::cin, opts, states);
            if (seq.name.empty()) seq.name = "stdin";
            return seq;
        }
        return sp::read_sequence_file(path, opts, states);
    }
};

struct EstimationFlags {
    std::size_t period = 3;
    std::size_t max_holding = sp::kDefaultMaxHolding;
    std::string zero_rows = "uniform";
    bool keep_censored = false;
    std::string holding = "mle";

    void attach(CLI::App* cmd) {
        cmd->add_option("--s", period, "Coding period (non-homogeneity)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--max-holding", max_holding, "Holding-time horizon M")
            ->check(CLI::PositiveNumber)
            ->envname("SEMIPERIOD_MAX_HOLDING")
            ->capture_default_str();
        cmd->add_option("--zero-rows", zero_rows, "States never exited: uniform off-diagonal row or error")
            ->check(CLI::IsMember({"uniform", "error"}))
            ->capture_default_str();
        cmd->add_flag("--keep-censored", keep_censored, "Use the right-censored final run for holding times");
        cmd->add_option("--holding-estimator", holding, "Holding-time estimator")
            ->check(CLI::IsMember({"mle", "destination-ratio"}))
            ->capture_default_str();
    }

    sp::EstimationConfig config() const {
        sp::EstimationConfig c;
        c.period = period;
        c.max_holding = max_holding;
        c.zero_row_policy = zero_rows == "error" ? sp::ZeroRowPolicy::Error : sp::ZeroRowPolicy::UniformOffDiagonal;
        c.drop_censored_final_run = !keep_censored;
        c.holding_estimator = sp::parse_holding_estimator(holding);
        return c;
    }
};

/// Output target: a file, or stdout for "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw sp::FormatError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

int run_generate(const sp::GeneratorSpec& spec, const std::string& out_path) {
    const sp::SymbolSequence seq = sp::generate(spec);
    Output out(out_path);
    sp::write_fasta(out.stream(), seq);
    return kExitOk;
}

int run_estimate(const SequenceInput& input, const EstimationFlags& flags, long d,
                 std::optional<long> kernel_horizon, const std::string& out_path) {
    const sp::SymbolSequence seq = input.read();
    const sp::NHSemiMarkovModel model = sp::estimate_nh(seq, flags.config());
    nlohmann::json j = sp::model_json(model, d, kernel_horizon);
    j["input"] = seq.name;
    j["length"] = seq.size();
    Output out(out_path);
    out.stream() << j.dump(2) << '\n';
    return kExitOk;
}

sp::AnalysisOptions analysis_options(const EstimationFlags& flags, long d, const std::string& variant,
                                     std::size_t warmup) {
    sp::AnalysisOptions options;
    options.d = d;
    options.estimation = flags.config();
    options.variant = sp::parse_variant(variant);
    options.warmup_cycles = warmup;
    return options;
}

int run_analyze(const SequenceInput& input, const sp::AnalysisOptions& options, const std::string& format,
                const std::string& out_path) {
    const sp::SymbolSequence seq = input.read();
    const sp::AnalysisResult result = sp::analyze_sequence(seq, options);
    const sp::ReportMetadata meta = sp::make_metadata(seq, options);
    Output out(out_path);
    if (format == "json") {
        out.stream() << sp::report_json(result, meta).dump(2) << '\n';
    } else {
        sp::write_csv(out.stream(), result, meta);
    }
    return kExitOk;
}

/// GREEN runs as periodic-region candidates, one CSV line each.
int run_detect(const SequenceInput& input, const sp::AnalysisOptions& options, const std::string& states,
               std::optional<std::size_t> position, std::size_t min_cycles, const std::string& out_path) {
    const sp::SymbolSequence seq = input.read();
    if (position && (*position < 1 || *position > options.estimation.period)) {
        throw sp::ArgumentError("--k must be in 1.." + std::to_string(options.estimation.period));
    }
    for (char c : states) seq.states.index(c);
    const sp::AnalysisResult result = sp::analyze_sequence(seq, options);
    const sp::ReportMetadata meta = sp::make_metadata(seq, options);
    Output out(out_path);
    for (const auto& [key, value] : meta.entries()) out.stream() << "# " << key << '=' << value << '\n';
    out.stream() << "state,k,first_cycle,last_cycle,cycles,first_position,last_position\n";
    const auto d = static_cast<std::size_t>(options.d);
    for (std::size_t k = 0; k < result.regions.size(); ++k) {
        if (position && *position != k + 1) continue;
        for (const sp::RegionAnnotation& ann : result.regions[k]) {
            const char symbol = seq.states.symbol(ann.state);
            if (!states.empty() && states.find(symbol) == std::string::npos) continue;
            for (const sp::ColorRun& run : ann.runs) {
                const std::size_t cycles = run.last_cycle - run.first_cycle + 1;
                if (run.color != sp::RegionColor::Green || cycles < min_cycles) continue;
                out.stream() << symbol << ',' << k + 1 << ',' << run.first_cycle << ',' << run.last_cycle << ','
                             << cycles << ',' << (run.first_cycle - 1) * d + 1 << ',' << run.last_cycle * d << '\n';
            }
        }
    }
    return kExitOk;
}

int run_verify(const sp::VerifyOptions& options) {
    const sp::VerifyReport report = sp::verify_kernels(options);
    for (const sp::VerifyCase& c : report.cases) {
        std::cout << (c.passed() ? "PASS " : "FAIL ") << (c.nh ? "nh" : "homogeneous") << " seed=" << c.seed
                  << " M=" << c.max_holding << " closed_vs_recursive=" << c.closed_error
                  << " row_sum_error=" << c.row_error << '\n';
    }
    const auto failed = std::count_if(report.cases.begin(), report.cases.end(),
                                      [](const sp::VerifyCase& c) { return !c.passed(); });
    std::cout << (failed == 0 ? "verify: all " : "verify: ") << (failed == 0 ? report.cases.size() : failed)
              << (failed == 0 ? " models passed" : " model(s) failed") << " (tolerance " << sp::kKernelTolerance
              << ")\n";
    return failed == 0 ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-Markov d-periodicity analysis of symbol sequences"};
    app.require_subcommand(1);

    // generate
    sp::GeneratorSpec gen;
    std::string gen_kind = "uniform";
    std::string gen_letter = "A";
    std::string gen_intervals;
    std::string gen_alphabet = "ACGT";
    std::string gen_out = "-";
    auto* generate = app.add_subcommand("generate", "Write a synthetic sequence as FASTA");
    generate->add_option("--kind", gen_kind, "uniform | periodic | embedded")
        ->check(CLI::IsMember({"uniform", "periodic", "embedded"}))
        ->capture_default_str();
    generate->add_option("--length", gen.length, "Sequence length")->capture_default_str();
    generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    generate->add_option("--period", gen.period, "Spacing of the fixed letter")->capture_default_str();
    generate->add_option("--letter", gen_letter, "Fixed letter")->capture_default_str();
    generate->add_option("--intervals", gen_intervals, "1-based start-end[,start-end...] for --kind embedded");
    generate->add_option("--alphabet", gen_alphabet, "Symbols")->capture_default_str();
    generate->add_option("--out", gen_out, "Output file ('-' for stdout)")->capture_default_str();

    // estimate
    SequenceInput est_input;
    EstimationFlags est_flags;
    long est_d = 3;
    std::optional<long> est_kernel;
    std::string est_out = "-";
    auto* estimate = app.add_subcommand("estimate", "Estimate a model and dump it as JSON");
    est_input.attach(estimate);
    est_flags.attach(estimate);
    estimate->add_option("--d", est_d, "Lag for the reported return probabilities")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    estimate->add_option("--kernel-horizon", est_kernel, "Also dump Q(k,n) for n up to this horizon")
        ->check(CLI::NonNegativeNumber);
    estimate->add_option("--out", est_out, "Output file ('-' for stdout)")->capture_default_str();

    // analyze / detect share the analysis flags
    SequenceInput an_input;
    EstimationFlags an_flags;
    long an_d = 3;
    std::string an_variant = "paper-survival";
    std::size_t an_warmup = sp::kDefaultWarmupCycles;
    std::string an_format = "csv";
    std::string an_out = "-";
    std::string det_states;
    std::optional<std::size_t> det_k;
    std::size_t det_min = 1;
    auto attach_analysis = [&](CLI::App* cmd) {
        an_input.attach(cmd);
        an_flags.attach(cmd);
        cmd->add_option("--d", an_d, "Cycle length")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--variant", an_variant, "Return-probability variant")
            ->check(CLI::IsMember({"paper-survival", "exact-entry"}))
            ->capture_default_str();
        cmd->add_option("--warmup", an_warmup, "Warm-up cycles for the initial estimate")
            ->check(CLI::PositiveNumber)
            ->envname("SEMIPERIOD_WARMUP")
            ->capture_default_str();
        cmd->add_option("--out", an_out, "Output file ('-' for stdout)")->capture_default_str();
    };
    auto* analyze = app.add_subcommand("analyze", "Per-cycle probabilities, ratios and colors");
    attach_analysis(analyze);
    analyze->add_option("--format", an_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    auto* detect = app.add_subcommand("detect", "List GREEN (rising-ratio) regions");
    attach_analysis(detect);
    detect->add_option("--states", det_states, "Symbols to report (default all)");
    detect->add_option("--k", det_k, "1-based coding position to report (default all)");
    detect->add_option("--min-cycles", det_min, "Shortest run to report")->capture_default_str();

    // verify
    sp::VerifyOptions ver;
    long ver_n = 12;
    auto* verify = app.add_subcommand("verify", "Check closed form against recursion on random models");
    verify->add_option("--n", ver_n, "Largest horizon n")->check(CLI::NonNegativeNumber)->capture_default_str();
    verify->add_option("--seed", ver.seed, "Base model seed")->capture_default_str();
    verify->add_option("--models", ver.homogeneous_models, "Random homogeneous models")->capture_default_str();
    verify->add_option("--nh-models", ver.nh_models, "Random non-homogeneous models")->capture_default_str();
    verify->add_option("--max-holding", ver.max_holding_cap, "Largest holding horizon M")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_flag("--perturb", ver.perturb, "Negative control: perturb one core entry in the closed form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*generate) {
            gen.kind = sp::parse_generator_kind(gen_kind);
            if (gen_letter.size() != 1) throw sp::ArgumentError("--letter must be a single symbol");
            gen.letter = gen_letter[0];
            gen.states = sp::StateSpace(gen_alphabet);
            if (!gen_intervals.empty()) gen.intervals = sp::parse_intervals(gen_intervals);
            return run_generate(gen, gen_out);
        }
        if (*estimate) return run_estimate(est_input, est_flags, est_d, est_kernel, est_out);
        if (*analyze) {
            return run_analyze(an_input, analysis_options(an_flags, an_d, an_variant, an_warmup), an_format, an_out);
        }
        if (*detect) {
            return run_detect(an_input, analysis_options(an_flags, an_d, an_variant, an_warmup), det_states, det_k,
                              det_min, an_out);
        }
        if (*verify) {
            ver.horizon = ver_n;
            ver.nh_horizon = ver_n;
            return run_verify(ver);
        }
    } catch (const sp::InvariantViolation& e) {
        std::cerr << "semiperiod: internal invariant violated: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::invalid_argument& e) {  // ArgumentError, ValidationError
        std::cerr << "semiperiod: " << e.what() << '\n';
        return kExitInput;
    } catch (const sp::FormatError& e) {
        std::cerr << "semiperiod: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "semiperiod: internal error: " << e.what() << '\n';
        return kExitInvariant;
    }
    return kExitOk;
}
