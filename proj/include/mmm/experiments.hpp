#pragma once

// Monte Carlo harness: simulate from a preset, fit, and count exact-recovery
// failures per sample size.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmm/dendrogram.hpp"
#include "mmm/model.hpp"
#include "mmm/partition.hpp"

namespace mmm {

enum class Method { kSweep, kRelation, kGreedy, kDendrogram, kExhaustive };

Method parse_method(std::string_view name);
std::string method_name(Method m);

/// Runs one selection method from `initial`. The dendrogram method clusters
/// the cells of `initial` and cuts with `cut`.
Partition select_partition(const CountTable& counts, const Partition& initial, Method method,
                           double penalty, const DendrogramCut& cut = {},
                           UnseenPolicy unseen = UnseenPolicy::kZeroDistance);

/// True iff the partitions group the states differently. Throws
/// std::invalid_argument if they live on different state spaces.
bool partition_error(const Partition& estimated, const Partition& truth);

enum class InitialKind { kSingleton, kTree, kCustom };

struct ExperimentSpec {
    std::string preset = "example-3.1";
    Method method = Method::kSweep;
    InitialKind initial = InitialKind::kTree;
    std::optional<Partition> custom_initial;
    std::vector<std::size_t> sizes = {4000, 6000, 8000, 10000};
    std::size_t replications = 200;
    std::uint64_t base_seed = 20100101;
    /// Defaults to (|A|-1)/2 of the preset when unset.
    std::optional<double> penalty;
    DendrogramCut cut;
    std::size_t burn_in = 1000;
    /// 0 = hardware concurrency.
    unsigned threads = 0;
};

struct SizeResult {
    std::size_t sample_length = 0;
    std::size_t replications = 0;
    std::size_t errors = 0;
    double proportion = 0.0;
    std::vector<bool> error;
    std::vector<std::uint64_t> seeds;
    /// Nonempty when a replication threw; such replications count as errors.
    std::vector<std::string> failures;
    double seconds = 0.0;
};

struct ErrorReport {
    std::vector<SizeResult> sizes;
    double seconds = 0.0;
};

/// Model and true partition for a preset name ("example-3.1").
PartitionModel preset_model(std::string_view name);

/// Replication r of size index i uses seed base_seed ^ (i * replications + r),
/// so every replication in the report has its own seed.
ErrorReport run_experiment(const ExperimentSpec& spec);

/// Dendrogram from the singleton partition, threshold cut at 1.
ExperimentSpec table1_spec(std::size_t replications, std::uint64_t seed);
/// Merge-relation closure from the context-tree partition.
ExperimentSpec table2_spec(std::size_t replications, std::uint64_t seed);

/// Excludes timings so reruns are byte-identical.
std::string report_to_csv(const ErrorReport& report);
nlohmann::json report_to_json(const ExperimentSpec& spec, const ErrorReport& report);

nlohmann::json spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const nlohmann::json& j);

}  // namespace mmm
