#pragma once

// Agglomerative clustering of cells with d as the dissimilarity, complete
// linkage, and the two ways of cutting the tree into a partition.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mmm/counts.hpp"
#include "mmm/partition.hpp"

namespace mmm {

/// Symmetric k x k matrix with zero diagonal and entries >= -1e-12.
class DissimilarityMatrix {
public:
    DissimilarityMatrix(std::size_t k, std::vector<double> values);

    std::size_t size() const { return k_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * k_ + j]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::size_t k_;
    std::vector<double> values_;
};

/// Node ids: leaves are 0..k-1, merge m creates node k+m.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
};

struct Dendrogram {
    std::size_t num_leaves = 0;
    std::vector<Merge> merges;
};

/// Entry (i,j) is pair_statistic on the base partition's aggregated counts.
DissimilarityMatrix distance_matrix(const CountTable& counts, const Partition& base);

/// Repeatedly joins the two clusters at minimal complete-linkage distance
/// (max over item pairs). Ties go to the pair whose smallest leaves are
/// lexicographically smallest; `left` is the cluster with the smaller leaf.
/// Throws std::invalid_argument for k < 2.
Dendrogram complete_linkage(const DissimilarityMatrix& m);

/// Cluster label per leaf, numbered by first appearance.
using Clustering = std::vector<CellId>;

/// Applies every merge with height < h.
Clustering cut_threshold(const Dendrogram& d, double h);

/// Undoes the last K-1 merges, then also applies any later merge tied in
/// height with the last one kept. Result has at most K clusters. Throws
/// std::invalid_argument for K outside [1, leaves].
Clustering cut_max_cells(const Dendrogram& d, std::size_t max_cells);

/// Pulls a leaf clustering (leaves = cells of `base`) back to states.
Partition expand_clustering(const Partition& base, const Clustering& clusters);

/// How cells with no observations are placed by dendrogram_partition.
enum class UnseenPolicy {
    kZeroDistance,     // keep them in the matrix at distance 0 from everything
    kAttachToLargest,  // cluster seen cells only, then add unseen ones to the largest cluster
};

struct DendrogramCut {
    enum class Kind { kThreshold, kMaxCells };
    Kind kind = Kind::kThreshold;
    double height = 1.0;
    std::size_t max_cells = 1;
};

/// distance_matrix + complete_linkage + cut, returned as a state partition.
Partition dendrogram_partition(const CountTable& counts, const Partition& base,
                               const DendrogramCut& cut,
                               UnseenPolicy policy = UnseenPolicy::kZeroDistance);

/// Newick with node height = merge height, leaves at height 0, and branch
/// length = parent height - child height, so two leaves merged at 1.0 give
/// "(a:1.0,b:1.0);". Labels must be nonempty and free of Newick
/// metacharacters and whitespace.
std::string to_newick(const Dendrogram& d, const std::vector<std::string>& labels);

struct NewickNode {
    std::string label;
    double length = 0.0;
    std::vector<NewickNode> children;
};

/// Parses the subset of Newick that to_newick writes (unquoted labels,
/// optional branch lengths). Throws std::invalid_argument on syntax errors.
NewickNode parse_newick(std::string_view text);

/// {"leaves": [...], "merges": [[left, right, height], ...]}
nlohmann::json dendrogram_to_json(const Dendrogram& d, const std::vector<std::string>& labels);
Dendrogram dendrogram_from_json(const nlohmann::json& j);

/// CSV with a leading empty header cell followed by the labels.
std::string matrix_to_csv(const DissimilarityMatrix& m, const std::vector<std::string>& labels);

}  // namespace mmm
