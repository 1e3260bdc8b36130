#include "mmm/dendrogram.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mmm/format.hpp"
#include "mmm/selection.hpp"

namespace mmm {

DissimilarityMatrix::DissimilarityMatrix(std::size_t k, std::vector<double> values)
    : k_(k), values_(std::move(values)) {
    if (values_.size() != k_ * k_) throw std::invalid_argument("matrix is not k x k");
    for (std::size_t i = 0; i < k_; ++i) {
        if (values_[i * k_ + i] != 0.0) throw std::invalid_argument("nonzero matrix diagonal");
        for (std::size_t j = 0; j < k_; ++j) {
            const double v = values_[i * k_ + j];
            if (std::isnan(v) || v < -1e-12) {
                throw std::invalid_argument("negative or NaN dissimilarity");
            }
            if (v != values_[j * k_ + i]) throw std::invalid_argument("matrix is not symmetric");
        }
    }
}

DissimilarityMatrix distance_matrix(const CountTable& counts, const Partition& base) {
    const auto cc = aggregate(counts, base);
    const std::size_t k = cc.num_cells;
    std::vector<double> values(k * k, 0.0);
    for (CellId i = 0; i < k; ++i) {
        for (CellId j = i + 1; j < k; ++j) {
            const double d = pair_statistic(cc, i, j, counts.sample_length());
            values[i * k + j] = d;
            values[j * k + i] = d;
        }
    }
    return {k, std::move(values)};
}

Dendrogram complete_linkage(const DissimilarityMatrix& m) {
    const std::size_t k = m.size();
    if (k < 2) throw std::invalid_argument("complete linkage needs at least 2 items");

    // Active clusters indexed by their smallest leaf; linkage[a*k+b] holds the
    // current cluster distance between active clusters a and b.
    std::vector<double> linkage = m.values();
    std::vector<bool> active(k, true);
    std::vector<std::size_t> node(k);
    std::iota(node.begin(), node.end(), std::size_t{0});

    Dendrogram out;
    out.num_leaves = k;
    out.merges.reserve(k - 1);
    for (std::size_t step = 0; step + 1 < k; ++step) {
        std::size_t best_a = k;
        std::size_t best_b = k;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < k; ++a) {
            if (!active[a]) continue;
            for (std::size_t b = a + 1; b < k; ++b) {
                if (!active[b]) continue;
                const double v = linkage[a * k + b];
                if (best_a == k || v < best) {
                    best = v;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        out.merges.push_back({node[best_a], node[best_b], best});
        for (std::size_t c = 0; c < k; ++c) {
            if (!active[c] || c == best_a || c == best_b) continue;
            const double v = std::max(linkage[best_a * k + c], linkage[best_b * k + c]);
            linkage[best_a * k + c] = v;
            linkage[c * k + best_a] = v;
        }
        active[best_b] = false;
        node[best_a] = k + step;
    }
    return out;
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

// Applies the first `count` merges and labels leaves by first appearance.
Clustering apply_merges(const Dendrogram& d, std::size_t count) {
    const std::size_t k = d.num_leaves;
    DisjointSets sets(k);
    // Any leaf of each node, so internal nodes can be united through leaves.
    std::vector<std::size_t> witness(k + d.merges.size());
    std::iota(witness.begin(), witness.begin() + static_cast<std::ptrdiff_t>(k), std::size_t{0});
    for (std::size_t m = 0; m < d.merges.size(); ++m) {
        witness[k + m] = witness.at(d.merges[m].left);
        if (m < count) sets.unite(witness[d.merges[m].left], witness.at(d.merges[m].right));
    }
    constexpr auto unset = std::numeric_limits<CellId>::max();
    std::vector<CellId> label_of_root(k, unset);
    Clustering out(k);
    CellId next = 0;
    for (std::size_t leaf = 0; leaf < k; ++leaf) {
        auto& l = label_of_root[sets.find(leaf)];
        if (l == unset) l = next++;
        out[leaf] = l;
    }
    return out;
}

}  // namespace

Clustering cut_threshold(const Dendrogram& d, double h) {
    if (std::isnan(h) || h < 0.0) throw std::invalid_argument("cut height must be >= 0");
    std::size_t count = 0;
    while (count < d.merges.size() && d.merges[count].height < h) ++count;
    return apply_merges(d, count);
}

Clustering cut_max_cells(const Dendrogram& d, std::size_t max_cells) {
    const std::size_t k = d.num_leaves;
    if (max_cells < 1 || max_cells > k) {
        throw std::invalid_argument("max cells " + std::to_string(max_cells) +
                                    " outside [1, " + std::to_string(k) + "]");
    }
    std::size_t count = k - max_cells;
    if (count > 0) {
        const double h = d.merges[count - 1].height;
        while (count < d.merges.size() && d.merges[count].height <= h) ++count;
    }
    return apply_merges(d, count);
}

Partition expand_clustering(const Partition& base, const Clustering& clusters) {
    if (clusters.size() != base.num_cells()) {
        throw std::invalid_argument("clustering size does not match base partition cells");
    }
    std::vector<CellId> labels(base.num_states());
    for (StateId s = 0; s < labels.size(); ++s) labels[s] = clusters[base.cell_of(s)];
    Partition raw(base.alphabet_size(), base.order(), std::move(labels));
    return {base.alphabet_size(), base.order(), raw.canonical_labels()};
}

Partition dendrogram_partition(const CountTable& counts, const Partition& base,
                               const DendrogramCut& cut, UnseenPolicy policy) {
    auto cut_tree = [&](const Dendrogram& d) {
        return cut.kind == DendrogramCut::Kind::kThreshold ? cut_threshold(d, cut.height)
                                                           : cut_max_cells(d, cut.max_cells);
    };
    if (policy == UnseenPolicy::kZeroDistance) {
        if (base.num_cells() < 2) return base;
        return expand_clustering(base, cut_tree(complete_linkage(distance_matrix(counts, base))));
    }

    const auto cc = aggregate(counts, base);
    std::vector<CellId> seen;
    for (CellId c = 0; c < cc.num_cells; ++c) {
        if (cc.cell_total[c] > 0) seen.push_back(c);
    }
    Clustering seen_clusters(seen.size(), 0);
    if (seen.size() >= 2) {
        std::vector<double> values(seen.size() * seen.size(), 0.0);
        for (std::size_t i = 0; i < seen.size(); ++i) {
            for (std::size_t j = i + 1; j < seen.size(); ++j) {
                const double d = pair_statistic(cc, seen[i], seen[j], counts.sample_length());
                values[i * seen.size() + j] = d;
                values[j * seen.size() + i] = d;
            }
        }
        auto dendro = complete_linkage(DissimilarityMatrix(seen.size(), std::move(values)));
        if (cut.kind == DendrogramCut::Kind::kMaxCells) {
            DendrogramCut clamped = cut;
            clamped.max_cells = std::min(cut.max_cells, seen.size());
            seen_clusters = cut_max_cells(dendro, clamped.max_cells);
        } else {
            seen_clusters = cut_tree(dendro);
        }
    }
    const CellId num_clusters =
        seen_clusters.empty() ? 1 : *std::max_element(seen_clusters.begin(), seen_clusters.end()) + 1;
    std::vector<std::size_t> cluster_states(num_clusters, 0);
    const auto base_cells = base.cells();
    for (std::size_t i = 0; i < seen.size(); ++i) {
        cluster_states[seen_clusters[i]] += base_cells[seen[i]].size();
    }
    const auto largest = static_cast<CellId>(
        std::max_element(cluster_states.begin(), cluster_states.end()) - cluster_states.begin());
    Clustering clusters(base.num_cells(), largest);
    for (std::size_t i = 0; i < seen.size(); ++i) clusters[seen[i]] = seen_clusters[i];
    return expand_clustering(base, clusters);
}

namespace {

void check_label(const std::string& label) {
    if (label.empty()) throw std::invalid_argument("empty Newick label");
    for (unsigned char c : label) {
        if (std::isspace(c) || std::string_view("()[]':;,").find(static_cast<char>(c)) !=
                                   std::string_view::npos) {
            throw std::invalid_argument("Newick label '" + label +
                                        "' contains a reserved character");
        }
    }
}

}  // namespace

std::string to_newick(const Dendrogram& d, const std::vector<std::string>& labels) {
    const std::size_t k = d.num_leaves;
    if (labels.size() != k) throw std::invalid_argument("label count does not match leaf count");
    for (const auto& l : labels) check_label(l);
    if (k == 1) return labels[0] + ";";
    if (d.merges.size() != k - 1) throw std::invalid_argument("dendrogram is incomplete");

    auto height = [&](std::size_t node) { return node < k ? 0.0 : d.merges[node - k].height; };
    // Iterative post-order to avoid deep recursion on chain-shaped trees.
    std::vector<std::string> text(k + d.merges.size());
    for (std::size_t leaf = 0; leaf < k; ++leaf) text[leaf] = labels[leaf];
    for (std::size_t m = 0; m < d.merges.size(); ++m) {
        const auto& mg = d.merges[m];
        const double h = mg.height;
        text[k + m] = "(" + text.at(mg.left) + ":" + format_double(h - height(mg.left)) + "," +
                      text.at(mg.right) + ":" + format_double(h - height(mg.right)) + ")";
        text[mg.left].clear();
        text[mg.right].clear();
    }
    return text.back() + ";";
}

namespace {

class NewickParser {
public:
    explicit NewickParser(std::string_view text) : text_(text) {}

    NewickNode parse() {
        NewickNode root = node();
        skip_space();
        expect(';');
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters");
        return root;
    }

private:
    NewickNode node() {
        NewickNode n;
        skip_space();
        if (peek() == '(') {
            ++pos_;
            n.children.push_back(node());
            skip_space();
            while (peek() == ',') {
                ++pos_;
                n.children.push_back(node());
                skip_space();
            }
            expect(')');
        }
        n.label = label();
        skip_space();
        if (peek() == ':') {
            ++pos_;
            n.length = number();
        }
        return n;
    }

    std::string label() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               std::string_view("()[]':;, \t\r\n").find(text_[pos_]) == std::string_view::npos) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    double number() {
        skip_space();
        double v = 0.0;
        const auto* begin = text_.data() + pos_;
        const auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
        if (ec != std::errc{}) fail("bad branch length");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("Newick parse error at offset " + std::to_string(pos_) + ": " +
                                    what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

NewickNode parse_newick(std::string_view text) { return NewickParser(text).parse(); }

nlohmann::json dendrogram_to_json(const Dendrogram& d, const std::vector<std::string>& labels) {
    if (labels.size() != d.num_leaves) {
        throw std::invalid_argument("label count does not match leaf count");
    }
    nlohmann::json merges = nlohmann::json::array();
    for (const auto& m : d.merges) merges.push_back({m.left, m.right, m.height});
    return {{"leaves", labels}, {"merges", merges}};
}

Dendrogram dendrogram_from_json(const nlohmann::json& j) {
    Dendrogram d;
    d.num_leaves = j.at("leaves").size();
    for (const auto& m : j.at("merges")) {
        d.merges.push_back({m.at(0).get<std::size_t>(), m.at(1).get<std::size_t>(),
                            m.at(2).get<double>()});
    }
    if (d.num_leaves > 0 && d.merges.size() + 1 != d.num_leaves) {
        throw std::invalid_argument("dendrogram JSON has wrong number of merges");
    }
    return d;
}

std::string matrix_to_csv(const DissimilarityMatrix& m, const std::vector<std::string>& labels) {
    if (labels.size() != m.size()) throw std::invalid_argument("label count does not match matrix");
    std::string out;
    for (const auto& l : labels) out += "," + l;
    out += "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += labels[i];
        for (std::size_t j = 0; j < m.size(); ++j) out += "," + format_double(m(i, j));
        out += "\n";
    }
    return out;
}

}  // namespace mmm
