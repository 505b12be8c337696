#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace semiperiod {

/// Ordered alphabet of distinct single-character symbols. Index order is the
/// matrix row/column order everywhere in the library.
class StateSpace {
public:
    StateSpace() : StateSpace("ACGT") {}

    explicit StateSpace(std::string_view symbols) : symbols_(symbols) {
        if (symbols_.size() < 2) {
            throw ValidationError("state space needs at least 2 symbols, got " +
                                  std::to_string(symbols_.size()));
        }
        lookup_.fill(-1);
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            auto c = static_cast<unsigned char>(symbols_[i]);
            if (lookup_[c] != -1) {
                throw ValidationError(std::string("duplicate symbol '") + symbols_[i] +
                                      "' in state space");
            }
            lookup_[c] = static_cast<int>(i);
        }
    }

    static StateSpace dna() { return StateSpace("ACGT"); }

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::string& symbols() const noexcept { return symbols_; }
    char symbol(std::size_t index) const { return symbols_.at(index); }

    std::optional<std::size_t> find(char c) const noexcept {
        int idx = lookup_[static_cast<unsigned char>(c)];
        if (idx < 0) return std::nullopt;
        return static_cast<std::size_t>(idx);
    }

    std::size_t index(char c) const {
        auto idx = find(c);
        if (!idx) throw ArgumentError(std::string("symbol '") + c + "' is not in alphabet " + symbols_);
        return *idx;
    }

    bool operator==(const StateSpace& other) const noexcept { return symbols_ == other.symbols_; }

private:
    std::string symbols_;
    std::array<int, 256> lookup_{};
};

}  // namespace semiperiod
