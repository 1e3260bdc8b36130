#pragma once

// Transition counts N_n(s,a) and N_n(s) over the order-M state space.

#include <cstdint>
#include <span>
#include <vector>

#include "mmm/alphabet.hpp"

namespace mmm {

using Count = std::uint64_t;

/// Dense [|A|^M x |A|] table of transition counts. Immutable once built.
///
/// N(s) is counted over the same positions as N(s,a), so
/// state_total(s) == sum over a of pair(s, a) for every state, and the grand
/// total is n - M.
class CountTable {
public:
    CountTable(std::size_t alphabet_size, int order, std::size_t sample_length,
               std::vector<Count> pair_counts);

    std::size_t alphabet_size() const { return alphabet_size_; }
    int order() const { return order_; }
    std::size_t num_states() const { return num_states_; }
    /// Sample length n (not n - M).
    std::size_t sample_length() const { return sample_length_; }

    Count pair(StateId s, Symbol a) const { return pair_[s * alphabet_size_ + a]; }
    Count state_total(StateId s) const { return state_[s]; }
    std::span<const Count> row(StateId s) const {
        return {pair_.data() + s * alphabet_size_, alphabet_size_};
    }
    std::span<const Count> pair_counts() const { return pair_; }
    std::span<const Count> state_counts() const { return state_; }

    /// Number of states with N(s) > 0.
    std::size_t observed_states() const;

private:
    std::size_t alphabet_size_;
    int order_;
    std::size_t num_states_;
    std::size_t sample_length_;
    std::vector<Count> pair_;
    std::vector<Count> state_;
};

/// Single left-to-right scan with a rolling base-|A| window.
/// Throws std::invalid_argument when the sequence has fewer than M+1 symbols.
CountTable count_transitions(std::span<const Symbol> symbols, std::size_t alphabet_size,
                             int order, std::uint64_t state_cap = 10'000'000);

inline CountTable count_transitions(const Sequence& seq, int order,
                                    std::uint64_t state_cap = 10'000'000) {
    return count_transitions(seq.symbols, seq.alphabet.size(), order, state_cap);
}

}  // namespace mmm
