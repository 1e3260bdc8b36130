#pragma once

// Merge statistic d_L(i,j) and the partition-selection procedures: the
// pairwise sweep, greedy agglomeration, and exhaustive BIC search.

#include <cstdint>
#include <span>
#include <vector>

#include "mmm/model.hpp"
#include "mmm/partition.hpp"

namespace mmm {

/// Outcome of one pairwise merge test. accept == (d < threshold).
struct MergeDecision {
    CellId i = 0;
    CellId j = 0;
    double d = 0.0;
    double threshold = 0.0;
    bool accept = false;
};

/// L^{ij}: cells i and j pooled into position min(i,j), later cells shift
/// down by one. Throws std::invalid_argument for i == j or out-of-range ids.
Partition merge_cells(const Partition& p, CellId i, CellId j);

/// Log-likelihood lost by pooling two count rows (before dividing by ln n).
/// Evaluated as N_i . (ln p_i - ln p_ij) + N_j . (ln p_j - ln p_ij), which is
/// exactly zero when the two empirical conditionals coincide.
double pooling_loss(std::span<const Count> row_i, Count total_i, std::span<const Count> row_j,
                    Count total_j);

/// d_L(i,j) = pooling_loss / ln(n). Empty cells give 0.
double pair_statistic(const CellCounts& cc, CellId i, CellId j, std::size_t sample_length);

MergeDecision decide_merge(const CellCounts& cc, CellId i, CellId j, std::size_t sample_length,
                           double penalty);

/// BIC of `partition` on `counts` with sample length counts.sample_length().
double partition_bic(const CountTable& counts, const Partition& partition, double penalty);

/// Scans pairs (i<j) in order and merges the first pair with d < v, then
/// restarts the scan on the merged partition. Stops after a full scan with no
/// merge. Accepted merges are appended to `trace` if given.
Partition mmm_sweep(const CountTable& counts, const Partition& initial, double penalty,
                    std::vector<MergeDecision>* trace = nullptr);

/// The pairwise merge test used as a relation on the initial cells: i and j are
/// related when d(i,j) < v, all d computed once on `initial`, and the result
/// is the equivalence closure of that relation. Classes are ordered by their
/// lowest initial cell.
Partition merge_relation_closure(const CountTable& counts, const Partition& initial,
                                 double penalty);

/// Repeatedly merges the pair with the smallest d while it is below v. Ties
/// go to the lowest (i, j) in current cell order.
Partition greedy_agglomerate(const CountTable& counts, const Partition& initial, double penalty,
                             std::vector<MergeDecision>* trace = nullptr);

/// Bell number B(k), exact for k <= 25.
std::uint64_t bell_number(unsigned k);

/// BIC argmax over every set partition of A^M. Ties go to fewer cells, then
/// the lexicographically smallest restricted growth string. Throws
/// std::length_error if |A|^M > max_states.
Partition exhaustive_bic_search(const CountTable& counts, double penalty,
                                std::size_t max_states = 10);

}  // namespace mmm
