#include "mmm/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mmm/io.hpp"

namespace mmm {

Symbol Rng::categorical(std::span<const double> cdf) {
    const double u = uniform();
    for (std::size_t a = 0; a < cdf.size(); ++a) {
        if (u < cdf[a]) return static_cast<Symbol>(a);
    }
    // u landed above a cdf that rounds to slightly below 1: take the last
    // symbol with positive mass.
    for (std::size_t a = cdf.size(); a-- > 0;) {
        if (a == 0 || cdf[a] > cdf[a - 1]) return static_cast<Symbol>(a);
    }
    return 0;
}

namespace {

std::vector<double> state_cdfs(const PartitionModel& model) {
    const auto a_size = model.alphabet.size();
    const auto n_states = model.partition.num_states();
    std::vector<double> cdf(n_states * a_size);
    for (StateId s = 0; s < n_states; ++s) {
        const auto& p = model.conditional_of_state(s);
        double acc = 0.0;
        for (std::size_t a = 0; a < a_size; ++a) {
            acc += p[a];
            cdf[s * a_size + a] = acc;
        }
    }
    return cdf;
}

}  // namespace

Sequence sample_sequence(const PartitionModel& model, const GeneratorConfig& cfg) {
    const auto a_size = model.alphabet.size();
    const auto m = static_cast<std::size_t>(model.order());
    const auto n_states = model.partition.num_states();
    if (cfg.length <= m) {
        throw std::invalid_argument("sequence length " + std::to_string(cfg.length) +
                                    " must exceed the order " + std::to_string(m));
    }
    const auto cdf = state_cdfs(model);
    Rng rng(cfg.seed);

    StateId state = 0;
    if (cfg.initial_state) {
        if (*cfg.initial_state >= n_states) throw std::invalid_argument("initial state out of range");
        state = *cfg.initial_state;
    } else {
        for (std::size_t k = 0; k < m; ++k) state = state * a_size + rng.below(a_size);
    }
    auto step = [&]() {
        const Symbol next =
            rng.categorical(std::span<const double>(cdf.data() + state * a_size, a_size));
        state = (state * a_size + next) % n_states;
        return next;
    };
    for (std::size_t t = 0; t < cfg.burn_in; ++t) step();

    Sequence seq{model.alphabet, {}};
    seq.symbols = decode_state(state, a_size, model.order());
    seq.symbols.reserve(cfg.length);
    while (seq.symbols.size() < cfg.length) seq.symbols.push_back(step());
    return seq;
}

std::vector<double> stationary_distribution(const PartitionModel& model, double tol,
                                            std::size_t max_iterations) {
    const auto a_size = model.alphabet.size();
    const auto n_states = model.partition.num_states();
    std::vector<double> pi(n_states, 1.0 / static_cast<double>(n_states));
    std::vector<double> next(n_states);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (StateId s = 0; s < n_states; ++s) {
            const auto& p = model.conditional_of_state(s);
            const StateId shifted = (s * a_size) % n_states;
            for (std::size_t a = 0; a < a_size; ++a) next[shifted + a] += pi[s] * p[a];
        }
        double change = 0.0;
        for (StateId s = 0; s < n_states; ++s) change += std::abs(next[s] - pi[s]);
        pi.swap(next);
        if (change < tol) return pi;
    }
    throw std::runtime_error("power iteration did not converge in " +
                             std::to_string(max_iterations) +
                             " iterations; the chain may be reducible or periodic");
}

PartitionModel example_model() {
    const Alphabet alphabet({"0", "1", "2"});
    const std::vector<std::vector<std::string>> classes = {
        {"000", "100", "200", "010", "110", "210", "020", "120", "220", "022", "122", "222"},
        {"001", "101", "201", "011", "111", "211", "021", "121", "221"},
        {"012", "112", "212", "002"},
        {"102"},
        {"202"},
    };
    const double p0[] = {0.2, 0.4, 0.4, 0.1, 0.3};
    const double p1[] = {0.3, 0.3, 0.1, 0.4, 0.5};

    std::vector<std::vector<StateId>> cells;
    std::vector<ConditionalDistribution> conditionals;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<StateId> members;
        for (const auto& s : classes[c]) members.push_back(parse_state(s, alphabet, 3));
        cells.push_back(std::move(members));
        conditionals.emplace_back(std::vector<double>{p0[c], p1[c], 1.0 - p0[c] - p1[c]}, 1e-12);
    }
    return PartitionModel(alphabet, Partition::from_cells(3, 3, cells), std::move(conditionals));
}

ContextTree example_tree() {
    return validate_tree(std::vector<std::string>{"0", "1", "12", "102", "202", "22", "002"},
                         Alphabet({"0", "1", "2"}));
}

ContextTree binary_example_tree() {
    return validate_tree(std::vector<std::string>{"0", "01", "011", "111"}, Alphabet({"0", "1"}));
}

nlohmann::json simulation_metadata(const PartitionModel& model, const GeneratorConfig& cfg) {
    nlohmann::json meta = {
        {"rng", kRngAlgorithm},
        {"seed", cfg.seed},
        {"burn_in", cfg.burn_in},
        {"length", cfg.length},
        {"model_hash", model_hash(model)},
    };
    meta["initial_state"] = cfg.initial_state
                                ? nlohmann::json(state_string(*cfg.initial_state, model.alphabet,
                                                              model.order()))
                                : nlohmann::json("uniform-random");
    return meta;
}

}  // namespace mmm
