#pragma once

// Per-cell conditional distributions, the modified maximum likelihood and the
// penalized BIC score.

#include <span>
#include <vector>

#include "mmm/alphabet.hpp"
#include "mmm/partition.hpp"

namespace mmm {

/// P(.|L) over the alphabet. Entries are >= 0 and sum to 1 within 1e-12.
class ConditionalDistribution {
public:
    /// Accepts `probs` if its sum is within `tolerance` of 1, then
    /// renormalizes. Throws std::invalid_argument otherwise.
    explicit ConditionalDistribution(std::vector<double> probs, double tolerance = 1e-12);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t a) const { return probs_[a]; }
    std::span<const double> probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

/// A partition with one next-symbol distribution per cell. Serves both as a
/// fitted model and as a generator.
struct PartitionModel {
    PartitionModel(Alphabet alphabet, Partition partition,
                   std::vector<ConditionalDistribution> conditionals);

    Alphabet alphabet;
    Partition partition;
    std::vector<ConditionalDistribution> conditionals;

    int order() const { return partition.order(); }
    const ConditionalDistribution& conditional_of_state(StateId s) const {
        return conditionals[partition.cell_of(s)];
    }
};

/// (|A| - 1) / 2, the BIC penalty coefficient.
inline double default_penalty(std::size_t alphabet_size) {
    return (static_cast<double>(alphabet_size) - 1.0) / 2.0;
}

/// N(L,a) / N(L). Throws std::domain_error for a cell with no data.
ConditionalDistribution empirical_conditional(const CellCounts& cc, CellId cell);

/// sum_{L,a} N(L,a) ln(N(L,a)/N(L)) with 0 ln 0 = 0. Always <= 0.
double log_ml(const CellCounts& cc);

/// log_ml(cc) - v K ln(n). Throws std::invalid_argument for v <= 0 or n < 2.
double bic(const CellCounts& cc, std::size_t sample_length, double penalty);

/// Relative entropy D(P||Q) in nats; +infinity if P is not absolutely
/// continuous with respect to Q.
double kl_divergence(const ConditionalDistribution& p, const ConditionalDistribution& q);

/// Maximum-likelihood model for the partition. Cells with no data get the
/// uniform distribution (they do not affect the likelihood).
PartitionModel fit_model(const Alphabet& alphabet, const CountTable& counts,
                         const Partition& partition);

}  // namespace mmm
