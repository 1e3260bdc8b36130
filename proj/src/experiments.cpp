#include "mmm/experiments.hpp"

#include <atomic>
#include <chrono>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mmm/format.hpp"
#include "mmm/io.hpp"
#include "mmm/selection.hpp"
#include "mmm/simulator.hpp"

namespace mmm {

Method parse_method(std::string_view name) {
    if (name == "sweep") return Method::kSweep;
    if (name == "relation") return Method::kRelation;
    if (name == "greedy") return Method::kGreedy;
    if (name == "dendrogram") return Method::kDendrogram;
    if (name == "exhaustive") return Method::kExhaustive;
    throw std::invalid_argument("unknown method '" + std::string(name) +
                                "' (use sweep, relation, greedy, dendrogram or exhaustive)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::kSweep: return "sweep";
        case Method::kRelation: return "relation";
        case Method::kGreedy: return "greedy";
        case Method::kDendrogram: return "dendrogram";
        case Method::kExhaustive: return "exhaustive";
    }
    return "unknown";
}

Partition select_partition(const CountTable& counts, const Partition& initial, Method method,
                           double penalty, const DendrogramCut& cut, UnseenPolicy unseen) {
    switch (method) {
        case Method::kSweep: return mmm_sweep(counts, initial, penalty);
        case Method::kRelation: return merge_relation_closure(counts, initial, penalty);
        case Method::kGreedy: return greedy_agglomerate(counts, initial, penalty);
        case Method::kDendrogram: return dendrogram_partition(counts, initial, cut, unseen);
        case Method::kExhaustive: return exhaustive_bic_search(counts, penalty);
    }
    throw std::invalid_argument("unknown method");
}

bool partition_error(const Partition& estimated, const Partition& truth) {
    if (estimated.alphabet_size() != truth.alphabet_size() || estimated.order() != truth.order()) {
        throw std::invalid_argument("partitions are over different state spaces");
    }
    return !(estimated == truth);
}

PartitionModel preset_model(std::string_view name) {
    if (name == "example-3.1") return example_model();
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (known: example-3.1)");
}

namespace {

Partition initial_partition(const ExperimentSpec& spec, const PartitionModel& model) {
    switch (spec.initial) {
        case InitialKind::kSingleton:
            return Partition::singleton(model.alphabet.size(), model.order());
        case InitialKind::kTree:
            if (spec.preset != "example-3.1") {
                throw std::invalid_argument("tree start is only defined for preset example-3.1");
            }
            return tree_to_partition(example_tree(), model.order());
        case InitialKind::kCustom:
            if (!spec.custom_initial) throw std::invalid_argument("custom initial partition missing");
            return *spec.custom_initial;
    }
    throw std::invalid_argument("unknown initial partition kind");
}

}  // namespace

ErrorReport run_experiment(const ExperimentSpec& spec) {
    if (spec.replications < 1) throw std::invalid_argument("replications must be >= 1");
    const auto model = preset_model(spec.preset);
    for (auto n : spec.sizes) {
        if (n <= static_cast<std::size_t>(model.order())) {
            throw std::invalid_argument("sample size " + std::to_string(n) + " must exceed the order");
        }
    }
    const auto initial = initial_partition(spec, model);
    const double penalty = spec.penalty.value_or(default_penalty(model.alphabet.size()));
    const auto& truth = model.partition;

    unsigned threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;

    const auto start_all = std::chrono::steady_clock::now();
    ErrorReport report;
    for (std::size_t size_index = 0; size_index < spec.sizes.size(); ++size_index) {
        const auto start = std::chrono::steady_clock::now();
        SizeResult result;
        result.sample_length = spec.sizes[size_index];
        result.replications = spec.replications;
        // vector<bool> is not safe for concurrent writes to distinct elements.
        std::vector<char> errors(spec.replications, 0);
        result.failures.assign(spec.replications, "");
        result.seeds.resize(spec.replications);
        for (std::size_t r = 0; r < spec.replications; ++r) {
            result.seeds[r] = spec.base_seed ^ (size_index * spec.replications + r);
        }

        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t r = next++; r < spec.replications; r = next++) {
                try {
                    GeneratorConfig cfg;
                    cfg.length = result.sample_length;
                    cfg.seed = result.seeds[r];
                    cfg.burn_in = spec.burn_in;
                    const auto seq = sample_sequence(model, cfg);
                    const auto counts = count_transitions(seq, model.order());
                    const auto estimate =
                        select_partition(counts, initial, spec.method, penalty, spec.cut);
                    errors[r] = partition_error(estimate, truth) ? 1 : 0;
                } catch (const std::exception& e) {
                    errors[r] = 1;
                    result.failures[r] = e.what();
                }
            }
        };
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        }

        result.error.assign(errors.begin(), errors.end());
        for (char e : errors) result.errors += e ? 1 : 0;
        result.proportion =
            static_cast<double>(result.errors) / static_cast<double>(spec.replications);
        result.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.sizes.push_back(std::move(result));
    }
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_all).count();
    return report;
}

ExperimentSpec table1_spec(std::size_t replications, std::uint64_t seed) {
    ExperimentSpec spec;
    spec.method = Method::kDendrogram;
    spec.initial = InitialKind::kSingleton;
    spec.replications = replications;
    spec.base_seed = seed;
    spec.cut.kind = DendrogramCut::Kind::kThreshold;
    spec.cut.height = 1.0;
    return spec;
}

ExperimentSpec table2_spec(std::size_t replications, std::uint64_t seed) {
    ExperimentSpec spec;
    spec.method = Method::kRelation;
    spec.initial = InitialKind::kTree;
    spec.replications = replications;
    spec.base_seed = seed;
    return spec;
}

std::string report_to_csv(const ErrorReport& report) {
    std::ostringstream out;
    out << "size,replications,errors,proportion\n";
    for (const auto& s : report.sizes) {
        out << s.sample_length << ',' << s.replications << ',' << s.errors << ','
            << format_double(s.proportion) << '\n';
    }
    return out.str();
}

nlohmann::json report_to_json(const ExperimentSpec& spec, const ErrorReport& report) {
    nlohmann::json sizes = nlohmann::json::array();
    for (const auto& s : report.sizes) {
        nlohmann::json reps = nlohmann::json::array();
        for (std::size_t r = 0; r < s.replications; ++r) {
            nlohmann::json rep = {{"replication", r}, {"seed", s.seeds[r]}, {"error", bool(s.error[r])}};
            if (!s.failures[r].empty()) rep["failure"] = s.failures[r];
            reps.push_back(std::move(rep));
        }
        sizes.push_back({{"size", s.sample_length},
                         {"replications", s.replications},
                         {"errors", s.errors},
                         {"proportion", s.proportion},
                         {"detail", std::move(reps)}});
    }
    return {{"spec", spec_to_json(spec)}, {"rng", kRngAlgorithm}, {"results", std::move(sizes)}};
}

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
    nlohmann::json j = {
        {"preset", spec.preset},
        {"method", method_name(spec.method)},
        {"sizes", spec.sizes},
        {"replications", spec.replications},
        {"base_seed", spec.base_seed},
        {"burn_in", spec.burn_in},
    };
    switch (spec.initial) {
        case InitialKind::kSingleton: j["initial"] = "singleton"; break;
        case InitialKind::kTree: j["initial"] = "tree"; break;
        case InitialKind::kCustom: {
            j["initial"] = "custom";
            const auto model = preset_model(spec.preset);
            nlohmann::json cells = nlohmann::json::array();
            for (const auto& cell : spec.custom_initial.value().cells()) {
                nlohmann::json members = nlohmann::json::array();
                for (StateId s : cell) members.push_back(state_string(s, model.alphabet, model.order()));
                cells.push_back(std::move(members));
            }
            j["custom_cells"] = std::move(cells);
            break;
        }
    }
    if (spec.penalty) j["penalty"] = *spec.penalty;
    if (spec.cut.kind == DendrogramCut::Kind::kThreshold) {
        j["cut"] = {{"threshold", spec.cut.height}};
    } else {
        j["cut"] = {{"max_cells", spec.cut.max_cells}};
    }
    return j;
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
    ExperimentSpec spec;
    spec.preset = j.value("preset", spec.preset);
    spec.method = parse_method(j.value("method", method_name(spec.method)));
    if (j.contains("sizes")) spec.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    spec.replications = j.value("replications", spec.replications);
    spec.base_seed = j.value("base_seed", spec.base_seed);
    spec.burn_in = j.value("burn_in", spec.burn_in);
    if (j.contains("penalty")) spec.penalty = j.at("penalty").get<double>();
    const std::string initial = j.value("initial", std::string("tree"));
    if (initial == "singleton") {
        spec.initial = InitialKind::kSingleton;
    } else if (initial == "tree") {
        spec.initial = InitialKind::kTree;
    } else if (initial == "custom") {
        spec.initial = InitialKind::kCustom;
        const auto model = preset_model(spec.preset);
        std::vector<std::vector<StateId>> cells;
        for (const auto& cell : j.at("custom_cells")) {
            std::vector<StateId> members;
            for (const auto& s : cell) {
                members.push_back(parse_state(s.get<std::string>(), model.alphabet, model.order()));
            }
            cells.push_back(std::move(members));
        }
        spec.custom_initial =
            Partition::from_cells(model.alphabet.size(), model.order(), cells);
    } else {
        throw std::invalid_argument("unknown initial '" + initial +
                                    "' (use singleton, tree or custom)");
    }
    if (j.contains("cut")) {
        const auto& cut = j.at("cut");
        if (cut.contains("threshold")) {
            spec.cut.kind = DendrogramCut::Kind::kThreshold;
            spec.cut.height = cut.at("threshold").get<double>();
        } else if (cut.contains("max_cells")) {
            spec.cut.kind = DendrogramCut::Kind::kMaxCells;
            spec.cut.max_cells = cut.at("max_cells").get<std::size_t>();
        } else {
            throw std::invalid_argument("cut needs 'threshold' or 'max_cells'");
        }
    }
    if (spec.replications < 1) throw std::invalid_argument("replications must be >= 1");
    return spec;
}

}  // namespace mmm
