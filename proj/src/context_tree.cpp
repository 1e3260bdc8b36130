#include "mmm/context_tree.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mmm {

namespace {

bool is_suffix(const Context& shorter, const Context& longer) {
    if (shorter.size() > longer.size()) return false;
    return std::equal(shorter.begin(), shorter.end(), longer.end() - static_cast<std::ptrdiff_t>(shorter.size()));
}

std::string render(const Context& c, const Alphabet& alphabet) {
    if (c.empty()) return "EMPTY";
    std::string out;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!alphabet.single_char() && k > 0) out += ':';
        out += alphabet.symbol(c[k]);
    }
    return out;
}

}  // namespace

std::string ContextTree::context_string(std::size_t index) const {
    return render(contexts_.at(index), alphabet_);
}

ContextTree validate_tree(std::vector<Context> contexts, const Alphabet& alphabet) {
    if (contexts.empty()) throw std::invalid_argument("context tree has no contexts");
    int depth = 0;
    for (const auto& c : contexts) {
        for (Symbol s : c) {
            if (s >= alphabet.size()) throw std::out_of_range("context symbol out of range");
        }
        depth = std::max(depth, static_cast<int>(c.size()));
    }
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        for (std::size_t j = 0; j < contexts.size(); ++j) {
            if (i == j) continue;
            if (is_suffix(contexts[i], contexts[j])) {
                throw std::invalid_argument("context '" + render(contexts[i], alphabet) +
                                            "' is a suffix of context '" +
                                            render(contexts[j], alphabet) + "'");
            }
        }
    }
    return ContextTree(alphabet, std::move(contexts), depth);
}

Context parse_context(std::string_view text, const Alphabet& alphabet) {
    if (text == "EMPTY") return {};
    if (text.empty()) throw std::invalid_argument("empty context string (write EMPTY)");
    Context c;
    if (alphabet.single_char()) {
        for (const auto& ch : utf8_chars(text)) c.push_back(alphabet.index_of(ch));
        return c;
    }
    std::string normalized(text);
    std::replace(normalized.begin(), normalized.end(), ':', ' ');
    std::istringstream in(normalized);
    std::string token;
    while (in >> token) c.push_back(alphabet.index_of(token));
    if (c.empty()) throw std::invalid_argument("context '" + std::string(text) + "' has no symbols");
    return c;
}

ContextTree validate_tree(const std::vector<std::string>& contexts, const Alphabet& alphabet) {
    std::vector<Context> parsed;
    parsed.reserve(contexts.size());
    for (const auto& c : contexts) parsed.push_back(parse_context(c, alphabet));
    return validate_tree(std::move(parsed), alphabet);
}

Partition tree_to_partition(const ContextTree& tree, int order) {
    if (order < tree.depth()) {
        throw std::invalid_argument("order " + std::to_string(order) +
                                    " is smaller than the tree depth " +
                                    std::to_string(tree.depth()));
    }
    const auto a_size = tree.alphabet().size();
    const auto n = state_count(a_size, order);
    constexpr auto unset = std::numeric_limits<CellId>::max();
    std::vector<CellId> labels(n, unset);
    for (StateId s = 0; s < n; ++s) {
        const Context state = decode_state(s, a_size, order);
        for (std::size_t c = 0; c < tree.size(); ++c) {
            if (!is_suffix(tree.contexts()[c], state)) continue;
            if (labels[s] != unset) {
                throw std::invalid_argument("state " + state_string(s, tree.alphabet(), order) +
                                            " matches more than one context");
            }
            labels[s] = static_cast<CellId>(c);
        }
        if (labels[s] == unset) {
            throw std::invalid_argument("context tree is incomplete: state " +
                                        state_string(s, tree.alphabet(), order) +
                                        " matches no context");
        }
    }
    return {a_size, order, std::move(labels)};
}

}  // namespace mmm
