#include "mmm/alphabet.hpp"

#include <cctype>
#include <stdexcept>

namespace mmm {

namespace {

bool has_space(std::string_view s) {
    for (unsigned char c : s) {
        if (std::isspace(c)) return true;
    }
    return false;
}

}  // namespace

std::vector<std::string> utf8_chars(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const auto lead = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        if (lead >= 0xF0) len = 4;
        else if (lead >= 0xE0) len = 3;
        else if (lead >= 0xC0) len = 2;
        if (i + len > text.size()) throw std::invalid_argument("truncated UTF-8 sequence");
        out.emplace_back(text.substr(i, len));
        i += len;
    }
    return out;
}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.size() < 2) {
        throw std::invalid_argument("alphabet needs at least 2 symbols, got " +
                                    std::to_string(symbols_.size()));
    }
    for (Symbol i = 0; i < symbols_.size(); ++i) {
        const auto& s = symbols_[i];
        if (s.empty() || has_space(s)) {
            throw std::invalid_argument("alphabet symbol must be nonempty without whitespace: '" +
                                        s + "'");
        }
        if (!index_.emplace(s, i).second) {
            throw std::invalid_argument("duplicate alphabet symbol '" + s + "'");
        }
        if (utf8_chars(s).size() != 1) single_char_ = false;
    }
    if (!single_char_) {
        for (const auto& s : symbols_) {
            if (s.find(':') != std::string::npos) {
                throw std::invalid_argument("':' is reserved as the state separator for "
                                            "multi-character alphabets: '" + s + "'");
            }
        }
    }
}

Symbol Alphabet::index_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) {
        throw std::invalid_argument("symbol '" + std::string(token) + "' is not in the alphabet");
    }
    return it->second;
}

bool Alphabet::contains(std::string_view token) const {
    return index_.count(std::string(token)) != 0;
}

std::uint64_t state_count(std::size_t alphabet_size, int order, std::uint64_t cap) {
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    if (alphabet_size < 2) throw std::invalid_argument("alphabet size must be >= 2");
    std::uint64_t count = 1;
    for (int k = 0; k < order; ++k) {
        if (count > cap / alphabet_size) {
            throw std::length_error("state space |A|^M exceeds cap of " + std::to_string(cap));
        }
        count *= alphabet_size;
    }
    return count;
}

StateId encode_state(std::span<const Symbol> window, std::size_t alphabet_size, int order) {
    if (order < 1 || window.size() != static_cast<std::size_t>(order)) {
        throw std::invalid_argument("window length " + std::to_string(window.size()) +
                                    " does not match order " + std::to_string(order));
    }
    StateId id = 0;
    for (Symbol s : window) {
        if (s >= alphabet_size) {
            throw std::out_of_range("symbol index " + std::to_string(s) + " out of range");
        }
        id = id * alphabet_size + s;
    }
    return id;
}

std::vector<Symbol> decode_state(StateId id, std::size_t alphabet_size, int order) {
    std::vector<Symbol> window(static_cast<std::size_t>(order));
    for (int k = order - 1; k >= 0; --k) {
        window[static_cast<std::size_t>(k)] = static_cast<Symbol>(id % alphabet_size);
        id /= alphabet_size;
    }
    if (id != 0) throw std::out_of_range("state id out of range for order");
    return window;
}

std::string state_string(StateId id, const Alphabet& alphabet, int order) {
    std::string out;
    const auto window = decode_state(id, alphabet.size(), order);
    for (std::size_t k = 0; k < window.size(); ++k) {
        if (!alphabet.single_char() && k > 0) out += ':';
        out += alphabet.symbol(window[k]);
    }
    return out;
}

StateId parse_state(std::string_view text, const Alphabet& alphabet, int order) {
    std::vector<Symbol> window;
    if (alphabet.single_char()) {
        for (const auto& c : utf8_chars(text)) window.push_back(alphabet.index_of(c));
    } else {
        std::size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find(':', start);
            if (end == std::string_view::npos) end = text.size();
            window.push_back(alphabet.index_of(text.substr(start, end - start)));
            start = end + 1;
        }
    }
    if (window.size() != static_cast<std::size_t>(order)) {
        throw std::invalid_argument("state '" + std::string(text) + "' has wrong length for order " +
                                    std::to_string(order));
    }
    return encode_state(window, alphabet.size(), order);
}

}  // namespace mmm
