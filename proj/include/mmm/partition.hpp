#pragma once

// Partitions of A^M into cells, and counts aggregated per cell.

#include <cstdint>
#include <span>
#include <vector>

#include "mmm/counts.hpp"

namespace mmm {

using CellId = std::uint32_t;

/// Labeling of the |A|^M states into K nonempty cells numbered 0..K-1.
///
/// Cell order is meaningful to the selection procedures (it fixes scan
/// order), but equality is label-invariant: two partitions compare equal iff
/// they group the states the same way.
class Partition {
public:
    /// Throws std::invalid_argument if labels are not contiguous from 0 or a
    /// cell is empty.
    Partition(std::size_t alphabet_size, int order, std::vector<CellId> cell_of);

    static Partition singleton(std::size_t alphabet_size, int order);
    static Partition one_cell(std::size_t alphabet_size, int order);
    /// Cells given as member lists; they must be disjoint and cover A^M.
    static Partition from_cells(std::size_t alphabet_size, int order,
                                const std::vector<std::vector<StateId>>& cells);

    std::size_t alphabet_size() const { return alphabet_size_; }
    int order() const { return order_; }
    std::size_t num_states() const { return cell_of_.size(); }
    std::size_t num_cells() const { return num_cells_; }
    CellId cell_of(StateId s) const { return cell_of_[s]; }
    std::span<const CellId> labels() const { return cell_of_; }

    /// Member states of each cell, ascending within a cell.
    std::vector<std::vector<StateId>> cells() const;

    /// Relabeling by first appearance over states 0..|S|-1 (a restricted
    /// growth string). Equal for equal set partitions.
    std::vector<CellId> canonical_labels() const;

    /// True if every cell of *this lies inside one cell of `coarser`.
    bool refines(const Partition& coarser) const;

    bool operator==(const Partition& other) const;

private:
    std::size_t alphabet_size_;
    int order_;
    std::vector<CellId> cell_of_;
    std::size_t num_cells_ = 0;
};

/// N^L(L,a) and N^L(L) for one partition of one CountTable.
struct CellCounts {
    std::size_t alphabet_size = 0;
    std::size_t num_cells = 0;
    /// Sample length n.
    std::size_t sample_length = 0;
    /// Row-major [K x |A|].
    std::vector<Count> cell_pair;
    std::vector<Count> cell_total;

    std::span<const Count> row(CellId cell) const {
        return {cell_pair.data() + static_cast<std::size_t>(cell) * alphabet_size, alphabet_size};
    }
};

/// Sums state rows into cell rows. Throws std::invalid_argument when the
/// partition and counts disagree on M or |A|.
CellCounts aggregate(const CountTable& counts, const Partition& partition);

}  // namespace mmm
