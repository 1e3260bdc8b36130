#include "mmm/partition.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace mmm {

Partition::Partition(std::size_t alphabet_size, int order, std::vector<CellId> cell_of)
    : alphabet_size_(alphabet_size), order_(order), cell_of_(std::move(cell_of)) {
    const auto expected = state_count(alphabet_size, order);
    if (cell_of_.size() != expected) {
        throw std::invalid_argument("partition labels " + std::to_string(cell_of_.size()) +
                                    " states, expected " + std::to_string(expected));
    }
    CellId max_label = 0;
    for (CellId c : cell_of_) max_label = std::max(max_label, c);
    std::vector<bool> used(static_cast<std::size_t>(max_label) + 1, false);
    for (CellId c : cell_of_) used[c] = true;
    for (std::size_t c = 0; c < used.size(); ++c) {
        if (!used[c]) {
            throw std::invalid_argument("partition cell " + std::to_string(c) + " is empty");
        }
    }
    num_cells_ = used.size();
}

Partition Partition::singleton(std::size_t alphabet_size, int order) {
    const auto n = state_count(alphabet_size, order);
    std::vector<CellId> labels(n);
    for (std::size_t s = 0; s < n; ++s) labels[s] = static_cast<CellId>(s);
    return {alphabet_size, order, std::move(labels)};
}

Partition Partition::one_cell(std::size_t alphabet_size, int order) {
    return {alphabet_size, order, std::vector<CellId>(state_count(alphabet_size, order), 0)};
}

Partition Partition::from_cells(std::size_t alphabet_size, int order,
                                const std::vector<std::vector<StateId>>& cells) {
    const auto n = state_count(alphabet_size, order);
    constexpr auto unset = std::numeric_limits<CellId>::max();
    std::vector<CellId> labels(n, unset);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].empty()) {
            throw std::invalid_argument("cell " + std::to_string(c) + " has no states");
        }
        for (StateId s : cells[c]) {
            if (s >= n) throw std::invalid_argument("state id " + std::to_string(s) + " out of range");
            if (labels[s] != unset) {
                throw std::invalid_argument("state id " + std::to_string(s) +
                                            " appears in more than one cell");
            }
            labels[s] = static_cast<CellId>(c);
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (labels[s] == unset) {
            throw std::invalid_argument("state id " + std::to_string(s) + " is in no cell");
        }
    }
    return {alphabet_size, order, std::move(labels)};
}

std::vector<std::vector<StateId>> Partition::cells() const {
    std::vector<std::vector<StateId>> out(num_cells_);
    for (StateId s = 0; s < cell_of_.size(); ++s) out[cell_of_[s]].push_back(s);
    return out;
}

std::vector<CellId> Partition::canonical_labels() const {
    constexpr auto unset = std::numeric_limits<CellId>::max();
    std::vector<CellId> remap(num_cells_, unset);
    std::vector<CellId> out(cell_of_.size());
    CellId next = 0;
    for (std::size_t s = 0; s < cell_of_.size(); ++s) {
        auto& r = remap[cell_of_[s]];
        if (r == unset) r = next++;
        out[s] = r;
    }
    return out;
}

bool Partition::refines(const Partition& coarser) const {
    if (coarser.num_states() != num_states()) return false;
    constexpr auto unset = std::numeric_limits<CellId>::max();
    std::vector<CellId> image(num_cells_, unset);
    for (std::size_t s = 0; s < cell_of_.size(); ++s) {
        auto& img = image[cell_of_[s]];
        if (img == unset) img = coarser.cell_of_[s];
        else if (img != coarser.cell_of_[s]) return false;
    }
    return true;
}

bool Partition::operator==(const Partition& other) const {
    return alphabet_size_ == other.alphabet_size_ && order_ == other.order_ &&
           num_cells_ == other.num_cells_ && canonical_labels() == other.canonical_labels();
}

CellCounts aggregate(const CountTable& counts, const Partition& partition) {
    if (counts.alphabet_size() != partition.alphabet_size() || counts.order() != partition.order()) {
        throw std::invalid_argument("partition (|A|=" + std::to_string(partition.alphabet_size()) +
                                    ", M=" + std::to_string(partition.order()) +
                                    ") does not match counts (|A|=" +
                                    std::to_string(counts.alphabet_size()) +
                                    ", M=" + std::to_string(counts.order()) + ")");
    }
    const auto a_size = counts.alphabet_size();
    CellCounts cc;
    cc.alphabet_size = a_size;
    cc.num_cells = partition.num_cells();
    cc.sample_length = counts.sample_length();
    cc.cell_pair.assign(cc.num_cells * a_size, 0);
    cc.cell_total.assign(cc.num_cells, 0);
    for (StateId s = 0; s < counts.num_states(); ++s) {
        const CellId c = partition.cell_of(s);
        const auto r = counts.row(s);
        for (std::size_t a = 0; a < a_size; ++a) cc.cell_pair[c * a_size + a] += r[a];
        cc.cell_total[c] += counts.state_total(s);
    }
    return cc;
}

}  // namespace mmm
