#include "mmm/model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mmm {

ConditionalDistribution::ConditionalDistribution(std::vector<double> probs, double tolerance)
    : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("empty conditional distribution");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument("probability " + std::to_string(p) + " is not in [0,1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > tolerance) {
        throw std::invalid_argument("probabilities sum to " + std::to_string(sum) +
                                    ", not 1");
    }
    for (double& p : probs_) p /= sum;
}

PartitionModel::PartitionModel(Alphabet alphabet_, Partition partition_,
                               std::vector<ConditionalDistribution> conditionals_)
    : alphabet(std::move(alphabet_)),
      partition(std::move(partition_)),
      conditionals(std::move(conditionals_)) {
    if (partition.alphabet_size() != alphabet.size()) {
        throw std::invalid_argument("partition alphabet size does not match alphabet");
    }
    if (conditionals.size() != partition.num_cells()) {
        throw std::invalid_argument("model has " + std::to_string(conditionals.size()) +
                                    " distributions for " +
                                    std::to_string(partition.num_cells()) + " cells");
    }
    for (const auto& c : conditionals) {
        if (c.size() != alphabet.size()) {
            throw std::invalid_argument("conditional distribution has wrong length");
        }
    }
}

ConditionalDistribution empirical_conditional(const CellCounts& cc, CellId cell) {
    if (cell >= cc.num_cells) throw std::out_of_range("cell index out of range");
    const Count total = cc.cell_total[cell];
    if (total == 0) {
        throw std::domain_error("no data for cell " + std::to_string(cell));
    }
    std::vector<double> probs(cc.alphabet_size);
    const auto r = cc.row(cell);
    for (std::size_t a = 0; a < probs.size(); ++a) {
        probs[a] = static_cast<double>(r[a]) / static_cast<double>(total);
    }
    return ConditionalDistribution(std::move(probs), 1e-12);
}

double log_ml(const CellCounts& cc) {
    double sum = 0.0;
    for (CellId c = 0; c < cc.num_cells; ++c) {
        const Count total = cc.cell_total[c];
        if (total == 0) continue;
        const double t = static_cast<double>(total);
        for (Count k : cc.row(c)) {
            if (k == 0) continue;
            const double x = static_cast<double>(k);
            sum += x * std::log(x / t);
        }
    }
    return sum;
}

double bic(const CellCounts& cc, std::size_t sample_length, double penalty) {
    if (!(penalty > 0.0) || !std::isfinite(penalty)) {
        throw std::invalid_argument("penalty must be positive and finite");
    }
    if (sample_length < 2) throw std::invalid_argument("sample length must be >= 2");
    return log_ml(cc) - penalty * static_cast<double>(cc.num_cells) *
                            std::log(static_cast<double>(sample_length));
}

double kl_divergence(const ConditionalDistribution& p, const ConditionalDistribution& q) {
    if (p.size() != q.size()) throw std::invalid_argument("distribution sizes differ");
    double sum = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (p[a] == 0.0) continue;
        if (q[a] == 0.0) return std::numeric_limits<double>::infinity();
        sum += p[a] * std::log(p[a] / q[a]);
    }
    return std::max(sum, 0.0);
}

PartitionModel fit_model(const Alphabet& alphabet, const CountTable& counts,
                         const Partition& partition) {
    const auto cc = aggregate(counts, partition);
    std::vector<ConditionalDistribution> conditionals;
    conditionals.reserve(cc.num_cells);
    for (CellId c = 0; c < cc.num_cells; ++c) {
        if (cc.cell_total[c] == 0) {
            conditionals.emplace_back(
                std::vector<double>(alphabet.size(), 1.0 / static_cast<double>(alphabet.size())),
                1e-12);
        } else {
            conditionals.push_back(empirical_conditional(cc, c));
        }
    }
    return PartitionModel(alphabet, partition, std::move(conditionals));
}

}  // namespace mmm
