#include "mmm/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mmm {

namespace {

// Mutable cell rows, updated by row addition on each merge.
class WorkingCells {
public:
    WorkingCells(const CountTable& counts, const Partition& initial)
        : partition_(initial), cc_(aggregate(counts, initial)) {}

    std::size_t size() const { return cc_.num_cells; }

    double statistic(CellId i, CellId j) const {
        return pair_statistic(cc_, i, j, cc_.sample_length);
    }

    void merge(CellId i, CellId j) {
        const auto a_size = cc_.alphabet_size;
        for (std::size_t a = 0; a < a_size; ++a) {
            cc_.cell_pair[i * a_size + a] += cc_.cell_pair[j * a_size + a];
        }
        cc_.cell_total[i] += cc_.cell_total[j];
        cc_.cell_pair.erase(cc_.cell_pair.begin() + static_cast<std::ptrdiff_t>(j * a_size),
                            cc_.cell_pair.begin() + static_cast<std::ptrdiff_t>((j + 1) * a_size));
        cc_.cell_total.erase(cc_.cell_total.begin() + j);
        --cc_.num_cells;
        partition_ = merge_cells(partition_, i, j);
    }

    const Partition& partition() const { return partition_; }

private:
    Partition partition_;
    CellCounts cc_;
};

void check_penalty(double penalty) {
    if (!(penalty > 0.0) || !std::isfinite(penalty)) {
        throw std::invalid_argument("penalty must be positive and finite");
    }
}

}  // namespace

Partition merge_cells(const Partition& p, CellId i, CellId j) {
    if (i == j) throw std::invalid_argument("cannot merge a cell with itself");
    if (i > j) std::swap(i, j);
    if (j >= p.num_cells()) {
        throw std::invalid_argument("cell index " + std::to_string(j) + " out of range for " +
                                    std::to_string(p.num_cells()) + " cells");
    }
    std::vector<CellId> labels(p.labels().begin(), p.labels().end());
    for (auto& c : labels) {
        if (c == j) c = i;
        else if (c > j) --c;
    }
    return {p.alphabet_size(), p.order(), std::move(labels)};
}

double pooling_loss(std::span<const Count> row_i, Count total_i, std::span<const Count> row_j,
                    Count total_j) {
    const Count total_ij = total_i + total_j;
    if (total_i == 0 || total_j == 0) return 0.0;
    const double ti = static_cast<double>(total_i);
    const double tj = static_cast<double>(total_j);
    const double tij = static_cast<double>(total_ij);
    double loss = 0.0;
    for (std::size_t a = 0; a < row_i.size(); ++a) {
        const Count ni = row_i[a];
        const Count nj = row_j[a];
        if (ni == 0 && nj == 0) continue;
        const double log_pooled = std::log(static_cast<double>(ni + nj) / tij);
        if (ni > 0) {
            const double x = static_cast<double>(ni);
            loss += x * (std::log(x / ti) - log_pooled);
        }
        if (nj > 0) {
            const double x = static_cast<double>(nj);
            loss += x * (std::log(x / tj) - log_pooled);
        }
    }
    return loss;
}

double pair_statistic(const CellCounts& cc, CellId i, CellId j, std::size_t sample_length) {
    if (i == j) throw std::invalid_argument("pair statistic needs two distinct cells");
    if (i >= cc.num_cells || j >= cc.num_cells) throw std::out_of_range("cell index out of range");
    if (sample_length < 2) throw std::invalid_argument("sample length must be >= 2");
    const double loss = pooling_loss(cc.row(i), cc.cell_total[i], cc.row(j), cc.cell_total[j]);
    return loss / std::log(static_cast<double>(sample_length));
}

MergeDecision decide_merge(const CellCounts& cc, CellId i, CellId j, std::size_t sample_length,
                           double penalty) {
    MergeDecision m;
    m.i = i;
    m.j = j;
    m.d = pair_statistic(cc, i, j, sample_length);
    m.threshold = penalty;
    m.accept = m.d < penalty;
    return m;
}

double partition_bic(const CountTable& counts, const Partition& partition, double penalty) {
    return bic(aggregate(counts, partition), counts.sample_length(), penalty);
}

Partition mmm_sweep(const CountTable& counts, const Partition& initial, double penalty,
                    std::vector<MergeDecision>* trace) {
    check_penalty(penalty);
    WorkingCells work(counts, initial);
    bool merged = true;
    while (merged) {
        merged = false;
        for (CellId i = 0; i + 1 < work.size() && !merged; ++i) {
            for (CellId j = i + 1; j < work.size(); ++j) {
                const double d = work.statistic(i, j);
                if (d < penalty) {
                    if (trace) trace->push_back({i, j, d, penalty, true});
                    work.merge(i, j);
                    merged = true;
                    break;
                }
            }
        }
    }
    return work.partition();
}

Partition merge_relation_closure(const CountTable& counts, const Partition& initial,
                                 double penalty) {
    check_penalty(penalty);
    const auto cc = aggregate(counts, initial);
    const std::size_t k = cc.num_cells;
    // root[c] is the lowest cell known to be related to c.
    std::vector<CellId> root(k);
    for (CellId c = 0; c < k; ++c) root[c] = c;
    auto find = [&](CellId c) {
        while (root[c] != c) c = root[c] = root[root[c]];
        return c;
    };
    for (CellId i = 0; i + 1 < k; ++i) {
        for (CellId j = i + 1; j < k; ++j) {
            if (pair_statistic(cc, i, j, cc.sample_length) < penalty) {
                const CellId a = find(i);
                const CellId b = find(j);
                root[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::vector<CellId> class_of_root(k, std::numeric_limits<CellId>::max());
    CellId next = 0;
    std::vector<CellId> class_of_cell(k);
    for (CellId c = 0; c < k; ++c) {
        auto& label = class_of_root[find(c)];
        if (label == std::numeric_limits<CellId>::max()) label = next++;
        class_of_cell[c] = label;
    }
    std::vector<CellId> labels(initial.num_states());
    for (StateId s = 0; s < labels.size(); ++s) labels[s] = class_of_cell[initial.cell_of(s)];
    return {initial.alphabet_size(), initial.order(), std::move(labels)};
}

Partition greedy_agglomerate(const CountTable& counts, const Partition& initial, double penalty,
                             std::vector<MergeDecision>* trace) {
    check_penalty(penalty);
    WorkingCells work(counts, initial);
    while (work.size() > 1) {
        CellId best_i = 0;
        CellId best_j = 1;
        double best = work.statistic(0, 1);
        for (CellId i = 0; i + 1 < work.size(); ++i) {
            for (CellId j = i + 1; j < work.size(); ++j) {
                const double d = work.statistic(i, j);
                if (d < best) {
                    best = d;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (!(best < penalty)) break;
        if (trace) trace->push_back({best_i, best_j, best, penalty, true});
        work.merge(best_i, best_j);
    }
    return work.partition();
}

std::uint64_t bell_number(unsigned k) {
    if (k > 25) throw std::out_of_range("bell_number is exact only up to k = 25");
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (unsigned r = 1; r <= k; ++r) {
        std::vector<std::uint64_t> next{row.back()};
        for (auto v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

Partition exhaustive_bic_search(const CountTable& counts, double penalty,
                                std::size_t max_states) {
    check_penalty(penalty);
    const std::size_t k = counts.num_states();
    if (k > max_states) {
        throw std::length_error("state space of " + std::to_string(k) +
                                " states is too large for exhaustive search (limit " +
                                std::to_string(max_states) + ")");
    }
    const std::size_t a_size = counts.alphabet_size();
    const double log_n = std::log(static_cast<double>(counts.sample_length()));

    // Restricted growth strings in lexicographic order; prefix_max[s] is the
    // largest label among positions 0..s.
    std::vector<CellId> rgs(k, 0);
    std::vector<CellId> prefix_max(k, 0);
    std::vector<CellId> best_rgs = rgs;
    double best_bic = -std::numeric_limits<double>::infinity();
    std::size_t best_cells = k + 1;

    CellCounts cc;
    cc.alphabet_size = a_size;
    cc.sample_length = counts.sample_length();
    for (;;) {
        const std::size_t cells = static_cast<std::size_t>(prefix_max[k - 1]) + 1;
        cc.num_cells = cells;
        cc.cell_pair.assign(cells * a_size, 0);
        cc.cell_total.assign(cells, 0);
        for (StateId s = 0; s < k; ++s) {
            const auto r = counts.row(s);
            for (std::size_t a = 0; a < a_size; ++a) cc.cell_pair[rgs[s] * a_size + a] += r[a];
            cc.cell_total[rgs[s]] += counts.state_total(s);
        }
        const double score = log_ml(cc) - penalty * static_cast<double>(cells) * log_n;
        if (score > best_bic || (score == best_bic && cells < best_cells)) {
            best_bic = score;
            best_cells = cells;
            best_rgs = rgs;
        }

        // Rightmost position that can still grow.
        std::size_t pos = k - 1;
        while (pos > 0 && rgs[pos] > prefix_max[pos - 1]) --pos;
        if (pos == 0) break;
        ++rgs[pos];
        prefix_max[pos] = std::max(prefix_max[pos - 1], rgs[pos]);
        for (std::size_t s = pos + 1; s < k; ++s) {
            rgs[s] = 0;
            prefix_max[s] = prefix_max[pos];
        }
    }
    return {counts.alphabet_size(), counts.order(), std::move(best_rgs)};
}

}  // namespace mmm
