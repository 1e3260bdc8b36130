#pragma once

// Variable-length context trees and their induced partitions of A^M.

#include <string>
#include <string_view>
#include <vector>

#include "mmm/alphabet.hpp"
#include "mmm/partition.hpp"

namespace mmm {

/// A context is written oldest symbol first; it matches the states whose most
/// recent symbols equal it, so "01" matches every state ending in ...01.
using Context = std::vector<Symbol>;

/// Suffix-free, nonempty set of contexts in a fixed order.
class ContextTree {
public:
    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<Context>& contexts() const { return contexts_; }
    std::size_t size() const { return contexts_.size(); }
    /// Length of the longest context; 0 for the tree {EMPTY}.
    int depth() const { return depth_; }

    std::string context_string(std::size_t index) const;

private:
    friend ContextTree validate_tree(std::vector<Context> contexts, const Alphabet& alphabet);
    ContextTree(Alphabet alphabet, std::vector<Context> contexts, int depth)
        : alphabet_(std::move(alphabet)), contexts_(std::move(contexts)), depth_(depth) {}

    Alphabet alphabet_;
    std::vector<Context> contexts_;
    int depth_ = 0;
};

/// Throws std::invalid_argument naming the offending pair when one context is
/// a suffix of another (duplicates included), or when the set is empty.
ContextTree validate_tree(std::vector<Context> contexts, const Alphabet& alphabet);

/// "EMPTY" is the empty context. Single-character alphabets concatenate
/// symbols; otherwise symbols are separated by spaces or ':'.
Context parse_context(std::string_view text, const Alphabet& alphabet);

ContextTree validate_tree(const std::vector<std::string>& contexts, const Alphabet& alphabet);

/// Cell i holds the states that have context i as a suffix. Throws
/// std::invalid_argument if M < depth or a state matches no context.
Partition tree_to_partition(const ContextTree& tree, int order);

}  // namespace mmm
