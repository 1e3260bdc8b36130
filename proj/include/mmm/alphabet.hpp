#pragma once

// Alphabets, symbol sequences and the base-|A| encoding of order-M states.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mmm {

using Symbol = std::uint32_t;
using StateId = std::uint64_t;

/// Ordered set of distinct symbols. Position in the list is the symbol index.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const { return symbols_.size(); }
    const std::string& symbol(Symbol index) const { return symbols_.at(index); }
    const std::vector<std::string>& symbols() const { return symbols_; }

    /// Throws std::invalid_argument for a token that is not in the alphabet.
    Symbol index_of(std::string_view token) const;
    bool contains(std::string_view token) const;

    /// True when every symbol is a single character, so state strings can
    /// be written by plain concatenation.
    bool single_char() const { return single_char_; }

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, Symbol> index_;
    bool single_char_ = true;
};

/// An observed sample x_1..x_n as alphabet indices.
struct Sequence {
    Alphabet alphabet;
    std::vector<Symbol> symbols;

    std::size_t size() const { return symbols.size(); }
};

/// Splits UTF-8 text into code points (one string per character).
std::vector<std::string> utf8_chars(std::string_view text);

/// Number of states |A|^M. Throws std::length_error if it exceeds `cap`.
std::uint64_t state_count(std::size_t alphabet_size, int order,
                          std::uint64_t cap = 10'000'000);

/// Base-|A| code of a window, most recent symbol in the least significant
/// digit, so "011" over {0,1} is 3.
StateId encode_state(std::span<const Symbol> window, std::size_t alphabet_size, int order);

std::vector<Symbol> decode_state(StateId id, std::size_t alphabet_size, int order);

/// Printable form of a state: concatenated symbols for single-character
/// alphabets, ':'-joined otherwise.
std::string state_string(StateId id, const Alphabet& alphabet, int order);

/// Inverse of state_string. Throws std::invalid_argument on malformed input.
StateId parse_state(std::string_view text, const Alphabet& alphabet, int order);

}  // namespace mmm
