#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "random.hpp"
#include "state_space.hpp"

namespace semiperiod {

/// A symbol sequence over a StateSpace, stored as 0-based alphabet indexes.
struct SymbolSequence {
    StateSpace states;
    std::vector<std::uint8_t> symbols;
    std::string name;

    std::size_t size() const noexcept { return symbols.size(); }
    bool empty() const noexcept { return symbols.empty(); }
    std::size_t operator[](std::size_t pos) const { return symbols[pos]; }

    std::string to_string() const {
        std::string out;
        out.reserve(symbols.size());
        for (auto s : symbols) out.push_back(states.symbol(s));
        return out;
    }

    /// The first `length` symbols (or all of them).
    SymbolSequence prefix(std::size_t length) const {
        SymbolSequence out{states, {}, name};
        out.symbols.assign(symbols.begin(),
                           symbols.begin() + static_cast<std::ptrdiff_t>(std::min(length, symbols.size())));
        return out;
    }
};

inline SymbolSequence make_sequence(std::string_view text, const StateSpace& states = StateSpace::dna(),
                                    std::string name = {}) {
    SymbolSequence out{states, {}, std::move(name)};
    out.symbols.reserve(text.size());
    for (char c : text) out.symbols.push_back(static_cast<std::uint8_t>(states.index(c)));
    return out;
}

enum class SequenceFormat { Fasta, Plain, Auto };
enum class UnknownSymbolPolicy { Skip, Error };

struct ReadOptions {
    SequenceFormat format = SequenceFormat::Auto;
    UnknownSymbolPolicy policy = UnknownSymbolPolicy::Skip;
    /// FASTA record to keep: 1-based index, or a header name (first word).
    std::optional<std::size_t> record_index;
    std::optional<std::string> record_name;
};

namespace detail {

inline std::string header_name(std::string_view header) {
    auto end = header.find_first_of(" \t\r");
    return std::string(header.substr(0, end));
}

inline void append_body(SymbolSequence& out, std::string_view line, UnknownSymbolPolicy policy,
                        std::size_t& position) {
    for (char raw : line) {
        if (std::isspace(static_cast<unsigned char>(raw))) continue;
        ++position;
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
        auto idx = out.states.find(c);
        if (!idx) {
            if (policy == UnknownSymbolPolicy::Error) {
                throw FormatError(std::string("unknown symbol '") + raw + "' at position " +
                                  std::to_string(position));
            }
            continue;
        }
        out.symbols.push_back(static_cast<std::uint8_t>(*idx));
    }
}

}  // namespace detail

/// Read one sequence. FASTA headers ('>') name the record and body lines are
/// concatenated; plain input ignores all whitespace. Lowercase is folded to
/// uppercase. Unknown-symbol positions are 1-based over the non-whitespace body.
inline SymbolSequence read_sequence(std::istream& in, const ReadOptions& options = {},
                                    const StateSpace& states = StateSpace::dna()) {
    SymbolSequence out{states, {}, {}};
    std::string line;
    std::size_t position = 0;
    SequenceFormat format = options.format;
    bool selector = options.record_index || options.record_name;

    std::size_t record = 0;
    bool capturing = false;
    bool done = false;
    bool saw_any_line = false;
    while (!done && std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (format == SequenceFormat::Auto) {
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            format = line[first] == '>' ? SequenceFormat::Fasta : SequenceFormat::Plain;
        }
        saw_any_line = true;
        if (format == SequenceFormat::Plain) {
            detail::append_body(out, line, options.policy, position);
            continue;
        }
        if (!line.empty() && line.front() == '>') {
            if (capturing) {
                done = true;
                break;
            }
            ++record;
            std::string name = detail::header_name(std::string_view(line).substr(1));
            bool wanted = !selector || (options.record_index && *options.record_index == record) ||
                          (options.record_name && *options.record_name == name);
            if (wanted) {
                capturing = true;
                out.name = std::string(std::string_view(line).substr(1));
            }
            continue;
        }
        if (record == 0) {
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            throw FormatError("FASTA body before the first '>' header");
        }
        if (capturing) detail::append_body(out, line, options.policy, position);
    }
    if (!saw_any_line) throw FormatError("empty sequence input");
    if (format == SequenceFormat::Fasta && selector && !capturing) {
        throw FormatError("requested FASTA record not found");
    }
    if (out.symbols.empty()) throw FormatError("sequence body is empty");
    return out;
}

inline SymbolSequence read_sequence_file(const std::string& path, const ReadOptions& options = {},
                                         const StateSpace& states = StateSpace::dna()) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open sequence file '" + path + "'");
    SymbolSequence seq = read_sequence(in, options, states);
    if (seq.name.empty()) seq.name = path;
    return seq;
}

/// Write a FASTA record with a fixed line width.
inline void write_fasta(std::ostream& out, const SymbolSequence& seq, std::size_t width = 60) {
    out << '>' << seq.name << '\n';
    const std::string text = seq.to_string();
    for (std::size_t pos = 0; pos < text.size(); pos += width) {
        out << std::string_view(text).substr(pos, width) << '\n';
    }
}

enum class GeneratorKind { Uniform, Periodic, Embedded };

inline std::string_view to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::Uniform: return "uniform";
        case GeneratorKind::Periodic: return "periodic";
        case GeneratorKind::Embedded: return "embedded";
    }
    return "unknown";
}

inline GeneratorKind parse_generator_kind(std::string_view text) {
    if (text == "uniform") return GeneratorKind::Uniform;
    if (text == "periodic") return GeneratorKind::Periodic;
    if (text == "embedded") return GeneratorKind::Embedded;
    throw ArgumentError("unknown generator kind '" + std::string(text) + "'");
}

/// 1-based inclusive position interval.
struct Interval {
    std::size_t start = 1;
    std::size_t end = 1;
    bool operator==(const Interval&) const = default;
};

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Uniform;
    std::size_t length = 1000;
    std::size_t period = 3;
    char letter = 'A';
    std::vector<Interval> intervals;
    std::uint64_t seed = 1;
    StateSpace states = StateSpace::dna();

    void validate() const {
        if (length == 0) throw ArgumentError("sequence length must be at least 1");
        if (period == 0) throw ArgumentError("period must be at least 1");
        if (kind != GeneratorKind::Uniform) states.index(letter);
        std::vector<Interval> sorted = intervals;
        std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.start < b.start; });
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const Interval& iv = sorted[i];
            if (iv.start < 1 || iv.end < iv.start || iv.end > length) {
                throw ArgumentError("interval " + std::to_string(iv.start) + "-" + std::to_string(iv.end) +
                                    " is not inside [1," + std::to_string(length) + "]");
            }
            if (i > 0 && sorted[i - 1].end >= iv.start) {
                throw ArgumentError("intervals " + std::to_string(sorted[i - 1].start) + "-" +
                                    std::to_string(sorted[i - 1].end) + " and " + std::to_string(iv.start) +
                                    "-" + std::to_string(iv.end) + " overlap");
            }
        }
        if (kind == GeneratorKind::Embedded && intervals.empty()) {
            throw ArgumentError("embedded generator needs at least one interval");
        }
    }

    /// FASTA header text recording everything needed to regenerate.
    std::string describe() const {
        std::ostringstream out;
        out << to_string(kind) << " length=" << length << " seed=" << seed << " rng=" << Rng::kAlgorithm
            << " alphabet=" << states.symbols();
        if (kind != GeneratorKind::Uniform) out << " period=" << period << " letter=" << letter;
        if (kind == GeneratorKind::Embedded) {
            out << " intervals=";
            for (std::size_t i = 0; i < intervals.size(); ++i) {
                out << (i ? "," : "") << intervals[i].start << '-' << intervals[i].end;
            }
        }
        return out.str();
    }
};

/// Synthetic sequences: i.i.d. uniform; a letter forced at positions 1, 1+p,
/// 1+2p, ...; or uniform with the letter substituted every p-th position from
/// the first position of each interval.
inline SymbolSequence generate(const GeneratorSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    SymbolSequence out{spec.states, {}, spec.describe()};
    out.symbols.resize(spec.length);
    const std::size_t n = spec.states.size();
    for (auto& s : out.symbols) s = static_cast<std::uint8_t>(rng.below(n));
    if (spec.kind == GeneratorKind::Uniform) return out;
    const auto letter = static_cast<std::uint8_t>(spec.states.index(spec.letter));
    if (spec.kind == GeneratorKind::Periodic) {
        for (std::size_t pos = 0; pos < spec.length; pos += spec.period) out.symbols[pos] = letter;
        return out;
    }
    for (const Interval& iv : spec.intervals) {
        for (std::size_t pos = iv.start; pos <= iv.end; pos += spec.period) out.symbols[pos - 1] = letter;
    }
    return out;
}

inline std::vector<Interval> parse_intervals(std::string_view text) {
    std::vector<Interval> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        auto dash = item.find('-');
        if (dash == std::string_view::npos) throw ArgumentError("interval '" + std::string(item) + "' is not start-end");
        try {
            out.push_back({std::stoul(std::string(item.substr(0, dash))),
                           std::stoul(std::string(item.substr(dash + 1)))});
        } catch (const std::logic_error&) {
            throw ArgumentError("interval '" + std::string(item) + "' is not start-end");
        }
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace semiperiod
