#include "mmm/counts.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace mmm {

CountTable::CountTable(std::size_t alphabet_size, int order, std::size_t sample_length,
                       std::vector<Count> pair_counts)
    : alphabet_size_(alphabet_size),
      order_(order),
      num_states_(state_count(alphabet_size, order)),
      sample_length_(sample_length),
      pair_(std::move(pair_counts)),
      state_(num_states_, 0) {
    if (pair_.size() != num_states_ * alphabet_size_) {
        throw std::invalid_argument("pair count array has " + std::to_string(pair_.size()) +
                                    " entries, expected " +
                                    std::to_string(num_states_ * alphabet_size_));
    }
    for (std::size_t s = 0; s < num_states_; ++s) {
        const auto r = row(s);
        state_[s] = std::accumulate(r.begin(), r.end(), Count{0});
    }
}

std::size_t CountTable::observed_states() const {
    std::size_t seen = 0;
    for (Count c : state_) seen += c > 0 ? 1 : 0;
    return seen;
}

CountTable count_transitions(std::span<const Symbol> symbols, std::size_t alphabet_size,
                             int order, std::uint64_t state_cap) {
    const auto num_states = state_count(alphabet_size, order, state_cap);
    const auto m = static_cast<std::size_t>(order);
    if (symbols.size() <= m) {
        throw std::invalid_argument("sequence of length " + std::to_string(symbols.size()) +
                                    " is too short for order " + std::to_string(order) +
                                    " (need at least M+1 symbols)");
    }
    for (Symbol s : symbols) {
        if (s >= alphabet_size) {
            throw std::out_of_range("symbol index " + std::to_string(s) + " out of range");
        }
    }

    std::vector<Count> pair(num_states * alphabet_size, 0);
    StateId window = encode_state(symbols.first(m), alphabet_size, order);
    for (std::size_t t = m; t < symbols.size(); ++t) {
        const Symbol next = symbols[t];
        ++pair[window * alphabet_size + next];
        window = (window * alphabet_size + next) % num_states;
    }
    return CountTable(alphabet_size, order, symbols.size(), std::move(pair));
}

}  // namespace mmm
