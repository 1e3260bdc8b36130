#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmm/context_tree.hpp"
#include "mmm/counts.hpp"
#include "mmm/dendrogram.hpp"
#include "mmm/experiments.hpp"
#include "mmm/format.hpp"
#include "mmm/io.hpp"
#include "mmm/model.hpp"
#include "mmm/selection.hpp"
#include "mmm/simulator.hpp"

namespace mmm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct InputOptions {
    std::string input;
    std::string mode = "chars";
    std::string alphabet;
    int order = 1;
};

void add_input_options(CLI::App* app, InputOptions& opts) {
    app->add_option("-i,--input", opts.input, "Sequence file")->required()->check(CLI::ExistingFile);
    app->add_option("-M,--order", opts.order, "Markov order M")->required()->check(CLI::PositiveNumber);
    app->add_option("--mode", opts.mode, "Sequence format: chars or tokens")
        ->check(CLI::IsMember({"chars", "tokens"}));
    app->add_option("--alphabet", opts.alphabet, "Alphabet file, one symbol per line")
        ->check(CLI::ExistingFile);
}

std::optional<Alphabet> load_alphabet(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return parse_alphabet(read_file(path));
}

Sequence load_sequence(const InputOptions& opts) {
    auto seq = parse_sequence(read_file(opts.input), parse_token_mode(opts.mode),
                              load_alphabet(opts.alphabet));
    if (seq.size() <= static_cast<std::size_t>(opts.order)) {
        throw std::invalid_argument("sequence length " + std::to_string(seq.size()) +
                                    " must exceed the order " + std::to_string(opts.order));
    }
    return seq;
}

double resolve_penalty(const std::optional<double>& flag, const Alphabet& alphabet) {
    const double v = flag.value_or(default_penalty(alphabet.size()));
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("penalty must be positive");
    return v;
}

// Flag first, then $MMM_SEED, then 1.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MMM_SEED"); env && *env) {
        return std::stoull(env);
    }
    return 1;
}

Partition load_initial(const std::string& initial, const Alphabet& alphabet, int order,
                       TokenMode mode) {
    if (initial == "singleton") return Partition::singleton(alphabet.size(), order);
    if (initial == "onecell") return Partition::one_cell(alphabet.size(), order);
    return tree_to_partition(parse_tree(read_file(initial), alphabet, mode), order);
}

fs::path with_suffix(const std::string& prefix, const std::string& suffix) {
    return fs::path(prefix + suffix);
}

std::string cell_label(const std::vector<StateId>& cell, const Alphabet& alphabet, int order) {
    std::string label;
    for (std::size_t k = 0; k < cell.size(); ++k) {
        if (k > 0) label += '+';
        label += state_string(cell[k], alphabet, order);
    }
    for (char& c : label) {
        if (std::string_view("()[]':;, \t").find(c) != std::string_view::npos) c = '_';
    }
    return label;
}

// ---- fit -------------------------------------------------------------------

struct FitOptions {
    InputOptions input;
    std::string method = "sweep";
    std::string initial = "singleton";
    std::optional<double> penalty;
    std::optional<double> threshold;
    std::optional<std::size_t> max_cells;
    std::string out;
};

int cmd_fit(const FitOptions& opts, std::ostream& out) {
    const auto seq = load_sequence(opts.input);
    const int order = opts.input.order;
    const auto counts = count_transitions(seq, order);
    const double penalty = resolve_penalty(opts.penalty, seq.alphabet);
    const auto method = parse_method(opts.method);
    const auto initial = load_initial(opts.initial, seq.alphabet, order,
                                      parse_token_mode(opts.input.mode));

    DendrogramCut cut;
    if (opts.max_cells) {
        cut.kind = DendrogramCut::Kind::kMaxCells;
        cut.max_cells = *opts.max_cells;
    } else {
        cut.height = opts.threshold.value_or(penalty);
    }
    const auto partition = select_partition(counts, initial, method, penalty, cut);
    const auto model = fit_model(seq.alphabet, counts, partition);
    const auto cc = aggregate(counts, partition);
    const double ml = log_ml(cc);
    const double score = bic(cc, seq.size(), penalty);
    const std::size_t k = partition.num_cells();
    const std::size_t params = k * (seq.alphabet.size() - 1);

    json report = {
        {"method", method_name(method)},
        {"initial", opts.initial == "singleton" || opts.initial == "onecell" ? opts.initial : "tree"},
        {"order", order},
        {"alphabet", seq.alphabet.symbols()},
        {"sample_length", seq.size()},
        {"penalty", penalty},
        {"cells", k},
        {"parameters", params},
        {"log_ml", ml},
        {"bic", score},
    };
    write_file_atomic(with_suffix(opts.out, ".partition.txt"), format_partition(partition, seq.alphabet));
    write_file_atomic(with_suffix(opts.out, ".model.json"), model_to_json(model).dump(2) + "\n");
    write_file_atomic(with_suffix(opts.out, ".report.json"), report.dump(2) + "\n");

    out << "method      " << method_name(method) << "\n"
        << "n           " << seq.size() << "\n"
        << "order       " << order << "\n"
        << "penalty     " << format_double(penalty) << "\n"
        << "cells       " << k << "\n"
        << "parameters  " << params << "\n"
        << "log-ML      " << format_double(ml) << "\n"
        << "BIC         " << format_double(score) << "\n";
    return 0;
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions {
    std::string preset;
    std::string model;
    std::size_t length = 0;
    std::optional<std::uint64_t> seed;
    std::size_t burn_in = 1000;
    std::string initial_state;
    std::string mode = "chars";
    std::string out;
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out) {
    if (opts.preset.empty() == opts.model.empty()) {
        throw std::invalid_argument("give exactly one of --preset or --model");
    }
    const auto model = opts.preset.empty() ? model_from_json(json::parse(read_file(opts.model)))
                                           : preset_model(opts.preset);
    GeneratorConfig cfg;
    cfg.length = opts.length;
    cfg.seed = resolve_seed(opts.seed);
    cfg.burn_in = opts.burn_in;
    if (!opts.initial_state.empty()) {
        cfg.initial_state = parse_state(opts.initial_state, model.alphabet, model.order());
    }
    const auto seq = sample_sequence(model, cfg);
    write_file_atomic(opts.out, format_sequence(seq, parse_token_mode(opts.mode)));
    write_file_atomic(opts.out + ".meta.json", simulation_metadata(model, cfg).dump(2) + "\n");
    out << "wrote " << seq.size() << " symbols to " << opts.out << " (seed " << cfg.seed << ")\n";
    return 0;
}

// ---- dendrogram ------------------------------------------------------------

struct DendrogramOptions {
    InputOptions input;
    std::string base = "singleton";
    std::optional<double> threshold;
    std::optional<std::size_t> max_cells;
    std::optional<double> penalty;
    std::string unseen = "zero";
    std::string out;
};

int cmd_dendrogram(const DendrogramOptions& opts, std::ostream& out) {
    const auto seq = load_sequence(opts.input);
    const int order = opts.input.order;
    const auto counts = count_transitions(seq, order);
    const auto base = load_initial(opts.base, seq.alphabet, order, parse_token_mode(opts.input.mode));
    if (base.num_cells() < 2) throw std::invalid_argument("base partition has fewer than 2 cells");

    DendrogramCut cut;
    if (opts.max_cells) {
        cut.kind = DendrogramCut::Kind::kMaxCells;
        cut.max_cells = *opts.max_cells;
    } else {
        cut.height = opts.threshold.value_or(resolve_penalty(opts.penalty, seq.alphabet));
    }
    const auto policy =
        opts.unseen == "largest" ? UnseenPolicy::kAttachToLargest : UnseenPolicy::kZeroDistance;

    const auto matrix = distance_matrix(counts, base);
    const auto tree = complete_linkage(matrix);
    std::vector<std::string> labels;
    for (const auto& cell : base.cells()) labels.push_back(cell_label(cell, seq.alphabet, order));
    const auto partition = dendrogram_partition(counts, base, cut, policy);

    write_file_atomic(with_suffix(opts.out, ".nwk"), to_newick(tree, labels) + "\n");
    write_file_atomic(with_suffix(opts.out, ".dendrogram.json"),
                      dendrogram_to_json(tree, labels).dump(2) + "\n");
    write_file_atomic(with_suffix(opts.out, ".matrix.csv"), matrix_to_csv(matrix, labels));
    write_file_atomic(with_suffix(opts.out, ".partition.txt"), format_partition(partition, seq.alphabet));

    out << "leaves      " << tree.num_leaves << "\n";
    if (cut.kind == DendrogramCut::Kind::kThreshold) {
        out << "cut         height < " << format_double(cut.height) << "\n";
    } else {
        out << "cut         at most " << cut.max_cells << " cells\n";
    }
    out << "cells       " << partition.num_cells() << "\n";
    return 0;
}

// ---- bic -------------------------------------------------------------------

struct BicOptions {
    InputOptions input;
    std::string partition;
    std::optional<double> penalty;
    std::string out;
};

int cmd_bic(const BicOptions& opts, std::ostream& out) {
    const auto seq = load_sequence(opts.input);
    const int order = opts.input.order;
    const auto counts = count_transitions(seq, order);
    const auto partition = parse_partition(read_file(opts.partition), seq.alphabet, order);
    const double penalty = resolve_penalty(opts.penalty, seq.alphabet);
    const auto cc = aggregate(counts, partition);
    const double ml = log_ml(cc);
    const double score = bic(cc, seq.size(), penalty);
    if (!opts.out.empty()) {
        const json report = {{"sample_length", seq.size()}, {"penalty", penalty},
                             {"cells", partition.num_cells()}, {"log_ml", ml}, {"bic", score}};
        write_file_atomic(opts.out, report.dump(2) + "\n");
    }
    out << "log-ML  " << format_double(ml) << "\n"
        << "BIC     " << format_double(score) << "\n"
        << "cells   " << partition.num_cells() << "\n";
    return 0;
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateOptions {
    std::string partition;
    std::string truth;
    std::string preset;
    std::string alphabet;
    int order = 0;
};

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out) {
    Partition truth = Partition::one_cell(2, 1);
    Alphabet alphabet;
    int order = opts.order;
    if (!opts.preset.empty()) {
        const auto model = preset_model(opts.preset);
        alphabet = model.alphabet;
        order = model.order();
        truth = model.partition;
    } else {
        if (opts.truth.empty() || opts.alphabet.empty() || order < 1) {
            throw std::invalid_argument("--truth needs --alphabet and --order (or use --preset)");
        }
        alphabet = parse_alphabet(read_file(opts.alphabet));
        truth = parse_partition(read_file(opts.truth), alphabet, order);
    }
    const auto estimated = parse_partition(read_file(opts.partition), alphabet, order);
    const bool error = partition_error(estimated, truth);
    out << (error ? "mismatch" : "match") << " (" << estimated.num_cells() << " cells vs "
        << truth.num_cells() << ")\n";
    return 0;
}

// ---- reproduce -------------------------------------------------------------

struct ReproduceOptions {
    int table = 0;
    std::string spec;
    std::size_t replications = 200;
    std::optional<std::uint64_t> seed;
    std::vector<std::size_t> sizes;
    std::optional<std::size_t> max_cells;
    std::string method;
    unsigned threads = 0;
    std::string out;
};

int cmd_reproduce(const ReproduceOptions& opts, std::ostream& out) {
    ExperimentSpec spec;
    const auto seed = resolve_seed(opts.seed);
    if (!opts.spec.empty()) {
        spec = spec_from_json(json::parse(read_file(opts.spec)));
        if (opts.seed) spec.base_seed = *opts.seed;
    } else if (opts.table == 1) {
        spec = table1_spec(opts.replications, seed);
        if (opts.max_cells) {
            spec.cut.kind = DendrogramCut::Kind::kMaxCells;
            spec.cut.max_cells = *opts.max_cells;
        }
    } else if (opts.table == 2) {
        spec = table2_spec(opts.replications, seed);
    } else {
        throw std::invalid_argument("give --table 1, --table 2 or --spec FILE");
    }
    if (!opts.sizes.empty()) spec.sizes = opts.sizes;
    if (!opts.method.empty()) spec.method = parse_method(opts.method);
    spec.threads = opts.threads;

    const auto report = run_experiment(spec);
    write_file_atomic(with_suffix(opts.out, ".csv"), report_to_csv(report));
    write_file_atomic(with_suffix(opts.out, ".json"), report_to_json(spec, report).dump(2) + "\n");

    out << "method " << method_name(spec.method) << ", " << spec.replications
        << " replications per size, base seed " << spec.base_seed << "\n";
    out << "  size  errors  proportion  seconds\n";
    for (const auto& s : report.sizes) {
        out << std::setw(6) << s.sample_length << std::setw(8) << s.errors << std::setw(12)
            << std::fixed << std::setprecision(3) << s.proportion << std::setw(9)
            << std::setprecision(2) << s.seconds << "\n";
        out.unsetf(std::ios::floatfield);
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimal Markov models: partition the order-M state space by penalized BIC"};
    app.name("mmm");
    app.require_subcommand(1);

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Select a partition and fit per-cell conditionals");
    add_input_options(fit_cmd, fit.input);
    fit_cmd->add_option("--method", fit.method, "sweep, relation, greedy, dendrogram or exhaustive")
        ->check(CLI::IsMember({"sweep", "relation", "greedy", "dendrogram", "exhaustive"}));
    fit_cmd->add_option("--initial", fit.initial, "singleton, onecell, or a context-tree file");
    fit_cmd->add_option("--penalty", fit.penalty, "BIC penalty v (default (|A|-1)/2)");
    auto* fit_threshold =
        fit_cmd->add_option("--threshold", fit.threshold, "Dendrogram cut height (default v)");
    fit_cmd->add_option("--max-cells", fit.max_cells, "Dendrogram cut to at most K cells")
        ->excludes(fit_threshold);
    fit_cmd->add_option("-o,--out", fit.out, "Output prefix")->required();

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Sample a sequence from a model");
    auto* preset_opt = sim_cmd->add_option("--preset", sim.preset, "Built-in model (example-3.1)");
    sim_cmd->add_option("--model", sim.model, "Model JSON file")
        ->check(CLI::ExistingFile)
        ->excludes(preset_opt);
    sim_cmd->add_option("-n,--length", sim.length, "Sequence length")->required();
    sim_cmd->add_option("--seed", sim.seed, "PRNG seed (default $MMM_SEED or 1)");
    sim_cmd->add_option("--burn-in", sim.burn_in, "Discarded steps before recording");
    sim_cmd->add_option("--initial-state", sim.initial_state, "Starting window (default random)");
    sim_cmd->add_option("--mode", sim.mode, "chars or tokens")->check(CLI::IsMember({"chars", "tokens"}));
    sim_cmd->add_option("-o,--out", sim.out, "Output sequence file")->required();

    DendrogramOptions dendro;
    auto* dendro_cmd = app.add_subcommand("dendrogram", "Complete-linkage dendrogram of d");
    add_input_options(dendro_cmd, dendro.input);
    dendro_cmd->add_option("--base", dendro.base, "singleton or a context-tree file");
    auto* threshold_opt =
        dendro_cmd->add_option("--threshold", dendro.threshold, "Cut height (default v)");
    dendro_cmd->add_option("--max-cells", dendro.max_cells, "Cut to at most K cells")
        ->excludes(threshold_opt);
    dendro_cmd->add_option("--penalty", dendro.penalty, "Penalty v, the default cut height");
    dendro_cmd->add_option("--unseen", dendro.unseen, "Unobserved cells: zero or largest")
        ->check(CLI::IsMember({"zero", "largest"}));
    dendro_cmd->add_option("-o,--out", dendro.out, "Output prefix")->required();

    BicOptions bic_opts;
    auto* bic_cmd = app.add_subcommand("bic", "Score a partition file");
    add_input_options(bic_cmd, bic_opts.input);
    bic_cmd->add_option("-p,--partition", bic_opts.partition, "Partition file")
        ->required()
        ->check(CLI::ExistingFile);
    bic_cmd->add_option("--penalty", bic_opts.penalty, "BIC penalty v (default (|A|-1)/2)");
    bic_cmd->add_option("-o,--out", bic_opts.out, "Optional JSON report");

    EvaluateOptions eval;
    auto* eval_cmd = app.add_subcommand("evaluate", "Compare a partition with the truth");
    eval_cmd->add_option("-p,--partition", eval.partition, "Estimated partition file")
        ->required()
        ->check(CLI::ExistingFile);
    auto* truth_opt = eval_cmd->add_option("--truth", eval.truth, "True partition file")
                          ->check(CLI::ExistingFile);
    eval_cmd->add_option("--preset", eval.preset, "Use a preset's partition as truth")
        ->excludes(truth_opt);
    eval_cmd->add_option("--alphabet", eval.alphabet, "Alphabet file")->check(CLI::ExistingFile);
    eval_cmd->add_option("-M,--order", eval.order, "Markov order");

    ReproduceOptions repro;
    auto* repro_cmd = app.add_subcommand("reproduce", "Monte Carlo error-rate tables");
    auto* table_opt = repro_cmd->add_option("--table", repro.table, "1 or 2")
                          ->check(CLI::IsMember({1, 2}));
    repro_cmd->add_option("--spec", repro.spec, "Experiment spec JSON")
        ->check(CLI::ExistingFile)
        ->excludes(table_opt);
    repro_cmd->add_option("--replications", repro.replications, "Replications per size")
        ->check(CLI::PositiveNumber);
    repro_cmd->add_option("--seed", repro.seed, "Base seed (default $MMM_SEED or 1)");
    repro_cmd->add_option("--sizes", repro.sizes, "Sample sizes")->delimiter(',');
    repro_cmd->add_option("--max-cells", repro.max_cells, "With --table 1: cut to at most K cells");
    repro_cmd->add_option("--method", repro.method, "Override the selection method");
    repro_cmd->add_option("--threads", repro.threads, "Worker threads (0 = all cores)");
    repro_cmd->add_option("-o,--out", repro.out, "Output prefix")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*fit_cmd) return cmd_fit(fit, out);
        if (*sim_cmd) return cmd_simulate(sim, out);
        if (*dendro_cmd) return cmd_dendrogram(dendro, out);
        if (*bic_cmd) return cmd_bic(bic_opts, out);
        if (*eval_cmd) return cmd_evaluate(eval, out);
        if (*repro_cmd) return cmd_reproduce(repro, out);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: " << msg << "\n";
        return 1;
    }
    return 1;
}

}  // namespace mmm::cli
