#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "mmm/counts.hpp"
#include "mmm/dendrogram.hpp"
#include "mmm/selection.hpp"
#include "mmm/simulator.hpp"
#include "oracles.hpp"

using namespace mmm;

namespace {

DissimilarityMatrix random_matrix(std::mt19937_64& rng, std::size_t k, bool integer_ties) {
    std::vector<double> v(k * k, 0.0);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const double x = integer_ties ? double(1 + rng() % 3) : u(rng);
            v[i * k + j] = v[j * k + i] = x;
        }
    return DissimilarityMatrix(k, v);
}

// Sorted leaf set of every internal node, in merge order.
std::vector<std::vector<std::size_t>> node_members(const Dendrogram& d) {
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < d.num_leaves; ++i) members.push_back({i});
    std::vector<std::vector<std::size_t>> out;
    for (const auto& m : d.merges) {
        auto u = members[m.left];
        u.insert(u.end(), members[m.right].begin(), members[m.right].end());
        std::sort(u.begin(), u.end());
        members.push_back(u);
        out.push_back(u);
    }
    return out;
}

std::set<std::string> leaf_sets(const NewickNode& n, std::vector<std::string>& acc) {
    std::set<std::string> out;
    if (n.children.empty()) {
        acc.push_back(n.label);
        return out;
    }
    std::vector<std::string> leaves;
    for (const auto& c : n.children) {
        auto sub = leaf_sets(c, leaves);
        out.insert(sub.begin(), sub.end());
    }
    std::sort(leaves.begin(), leaves.end());
    std::string key;
    for (const auto& l : leaves) key += l + ",";
    out.insert(key);
    acc.insert(acc.end(), leaves.begin(), leaves.end());
    return out;
}

Sequence sample(std::size_t n, std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.length = n;
    cfg.seed = seed;
    return sample_sequence(example_model(), cfg);
}

}  // namespace

TEST_CASE("matrix validation") {
    CHECK_THROWS_AS(DissimilarityMatrix(2, {0, 1, 2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(DissimilarityMatrix(2, {1, 1, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(DissimilarityMatrix(2, {0, -1, -1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(complete_linkage(DissimilarityMatrix(1, {0})), std::invalid_argument);
}

TEST_CASE("two leaves") {
    auto d = complete_linkage(DissimilarityMatrix(2, {0, 0.7, 0.7, 0}));
    REQUIRE(d.merges.size() == 1);
    CHECK(d.merges[0].height == 0.7);
    CHECK(to_newick(complete_linkage(DissimilarityMatrix(2, {0, 1, 1, 0})), {"a", "b"}) ==
          "(a:1.0,b:1.0);");
}

TEST_CASE("zero-distance pair merges first") {
    DissimilarityMatrix m(3, {0, 2, 3,
                              2, 0, 0,
                              3, 0, 0});
    auto d = complete_linkage(m);
    CHECK(d.merges[0].left == 1);
    CHECK(d.merges[0].right == 2);
    CHECK(d.merges[0].height == 0.0);
    CHECK(d.merges[1].height == 3.0);
}

TEST_CASE("hand-built three-leaf chain") {
    // a-b close, c far: ((a,b),c) with heights 1 and max(4,5) = 5.
    DissimilarityMatrix m(3, {0, 1, 4,
                              1, 0, 5,
                              4, 5, 0});
    auto d = complete_linkage(m);
    CHECK(to_newick(d, {"a", "b", "c"}) == "((a:1.0,b:1.0):4.0,c:5.0);");
}

TEST_CASE("complete linkage matches brute force") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const bool ties = trial % 3 == 0;
        auto m = random_matrix(rng, 6, ties);
        auto d = complete_linkage(m);
        auto ref = oracle::brute_complete_linkage(m.values(), 6);
        REQUIRE(d.merges.size() == ref.size());
        auto members = node_members(d);
        for (std::size_t s = 0; s < ref.size(); ++s) {
            CHECK(d.merges[s].height == ref[s].height);
            CHECK(members[s] == ref[s].members);
        }
        for (std::size_t s = 1; s < d.merges.size(); ++s) {
            CHECK(d.merges[s].height >= d.merges[s - 1].height);
        }
    }
}

TEST_CASE("threshold and size cuts") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = random_matrix(rng, 7, trial % 2 == 0);
        auto d = complete_linkage(m);
        const auto single = cut_threshold(d, 0.0);
        for (CellId i = 0; i < 7; ++i) CHECK(single[i] == i);
        const auto all = cut_threshold(d, std::numeric_limits<double>::infinity());
        CHECK(std::all_of(all.begin(), all.end(), [](CellId c) { return c == 0; }));
        CHECK(cut_max_cells(d, 7) == single);
        CHECK(cut_max_cells(d, 1) == all);
        for (std::size_t K = 1; K <= 7; ++K) {
            auto c = cut_max_cells(d, K);
            CHECK(*std::max_element(c.begin(), c.end()) + 1 <= K);
        }
        // Within a threshold cluster every pair is closer than h.
        const double h = 2.0;
        auto c = cut_threshold(d, h);
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t j = 0; j < 7; ++j)
                if (c[i] == c[j]) CHECK(m(i, j) < h);
    }
    auto d = complete_linkage(DissimilarityMatrix(2, {0, 1, 1, 0}));
    CHECK_THROWS_AS(cut_max_cells(d, 0), std::invalid_argument);
    CHECK_THROWS_AS(cut_max_cells(d, 3), std::invalid_argument);
}

TEST_CASE("block matrix separates into blocks") {
    const std::size_t k = 6;
    std::vector<double> v(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j) v[i * k + j] = (i % 2 == j % 2) ? 0.1 + 0.01 * double(i + j) : 10.0;
    auto d = complete_linkage(DissimilarityMatrix(k, v));
    CHECK(cut_threshold(d, 1.0) == Clustering{0, 1, 0, 1, 0, 1});
    CHECK(cut_max_cells(d, 2) == Clustering{0, 1, 0, 1, 0, 1});
}

TEST_CASE("tied heights under a size cut") {
    // Every off-diagonal entry equal: all merges tie, so asking for 2 cells
    // keeps the tied merges and yields one cluster.
    std::vector<double> v(16, 1.0);
    for (int i = 0; i < 4; ++i) v[i * 4 + i] = 0.0;
    auto d = complete_linkage(DissimilarityMatrix(4, v));
    auto c = cut_max_cells(d, 2);
    CHECK(*std::max_element(c.begin(), c.end()) == 0);
}

TEST_CASE("newick round trip and permutation") {
    std::mt19937_64 rng(77);
    auto m = random_matrix(rng, 6, false);
    const std::vector<std::string> labels = {"s0", "s1", "s2", "s3", "s4", "s5"};
    auto d = complete_linkage(m);
    auto text = to_newick(d, labels);
    auto tree = parse_newick(text);
    std::vector<std::string> leaves;
    auto clades = leaf_sets(tree, leaves);
    CHECK(leaves.size() == 6);

    // Relabel leaves via a permutation of the matrix: same clades by name.
    std::vector<std::size_t> perm = {3, 0, 5, 1, 4, 2};
    std::vector<double> pv(36);
    std::vector<std::string> plabels(6);
    for (std::size_t i = 0; i < 6; ++i) {
        plabels[i] = labels[perm[i]];
        for (std::size_t j = 0; j < 6; ++j) pv[i * 6 + j] = m(perm[i], perm[j]);
    }
    auto pd = complete_linkage(DissimilarityMatrix(6, pv));
    std::vector<std::string> pleaves;
    CHECK(leaf_sets(parse_newick(to_newick(pd, plabels)), pleaves) == clades);

    CHECK_THROWS_AS(to_newick(d, {"a b", "c", "d", "e", "f", "g"}), std::invalid_argument);
    CHECK_THROWS_AS(parse_newick("((a,b);"), std::invalid_argument);
}

TEST_CASE("newick branch lengths sum to the root height") {
    auto tree = parse_newick("((a:1.0,b:1.0):4.0,c:5.0);");
    REQUIRE(tree.children.size() == 2);
    CHECK(tree.children[0].length + tree.children[0].children[0].length == 5.0);
    CHECK(tree.children[1].label == "c");
}

TEST_CASE("json round trip") {
    std::mt19937_64 rng(8);
    auto d = complete_linkage(random_matrix(rng, 5, false));
    auto j = dendrogram_to_json(d, {"a", "b", "c", "d", "e"});
    auto back = dendrogram_from_json(j);
    REQUIRE(back.merges.size() == d.merges.size());
    for (std::size_t s = 0; s < d.merges.size(); ++s) {
        CHECK(back.merges[s].left == d.merges[s].left);
        CHECK(back.merges[s].right == d.merges[s].right);
        CHECK(back.merges[s].height == d.merges[s].height);
    }
}

TEST_CASE("distance matrix entries are pair statistics") {
    auto seq = sample(3000, 3);
    auto counts = count_transitions(seq, 3);
    auto base = Partition::singleton(3, 3);
    auto m = distance_matrix(counts, base);
    auto cc = aggregate(counts, base);
    for (CellId i = 0; i < 27; ++i) {
        CHECK(m(i, i) == 0.0);
        for (CellId j = i + 1; j < 27; ++j) CHECK(m(i, j) == pair_statistic(cc, i, j, 3000));
    }
    CountTable eq(2, 1, 100, {10, 10, 20, 20});
    CHECK(distance_matrix(eq, Partition::singleton(2, 1))(0, 1) == 0.0);
}

TEST_CASE("simulated sample at n=9000 recovers the true classes") {
    const auto truth = example_model().partition;
    auto counts = count_transitions(sample(9000, 2), 3);
    auto base = Partition::singleton(3, 3);
    DendrogramCut threshold;
    CHECK(dendrogram_partition(counts, base, threshold) == truth);
    DendrogramCut five{DendrogramCut::Kind::kMaxCells, 1.0, 5};
    CHECK(dendrogram_partition(counts, base, five) == truth);
    DendrogramCut all{DendrogramCut::Kind::kMaxCells, 1.0, 27};
    CHECK(dendrogram_partition(counts, base, all) == base);
}

TEST_CASE("unseen cells") {
    // States 2 and 3 never occur.
    CountTable counts(2, 2, 2003, {1000, 0, 0, 1000, 0, 0, 0, 0});
    auto base = Partition::singleton(2, 2);
    DendrogramCut cut;
    auto largest = dendrogram_partition(counts, base, cut, UnseenPolicy::kAttachToLargest);
    CHECK(largest.num_cells() == 2);
    CHECK(largest.cell_of(2) == largest.cell_of(0));
    CHECK(largest.cell_of(3) == largest.cell_of(0));
    auto zero = dendrogram_partition(counts, base, cut, UnseenPolicy::kZeroDistance);
    CHECK(zero.cell_of(0) != zero.cell_of(1));
}
