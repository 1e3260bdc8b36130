#pragma once

// Sampling sequences from a PartitionModel, plus the built-in presets.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmm/context_tree.hpp"
#include "mmm/model.hpp"

namespace mmm {

/// Name recorded in metadata; bump the suffix if the draw procedure changes.
inline constexpr const char* kRngAlgorithm = "mt19937_64/u53-inverse-cdf/v1";

/// mt19937_64 with a portable 53-bit uniform, so draws are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on {0, ..., bound-1}.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
    }
    /// Index drawn by inverting the cumulative sums in `cdf` (last entry ~1).
    Symbol categorical(std::span<const double> cdf);

private:
    std::mt19937_64 engine_;
};

struct GeneratorConfig {
    std::size_t length = 0;
    std::uint64_t seed = 0;
    /// Steps simulated and discarded before recording.
    std::size_t burn_in = 1000;
    /// Starting window; drawn uniformly at random when empty.
    std::optional<StateId> initial_state;
};

/// The first M recorded symbols are the window reached after burn-in; every
/// later symbol is drawn from P(.|cell of the previous M symbols).
/// Throws std::invalid_argument when length <= M.
Sequence sample_sequence(const PartitionModel& model, const GeneratorConfig& cfg);

/// Fixed point of the induced |A|^M-state chain by power iteration, stopping
/// when the l1 change drops below `tol`. Throws std::runtime_error if it has
/// not converged within `max_iterations`.
std::vector<double> stationary_distribution(const PartitionModel& model, double tol = 1e-12,
                                            std::size_t max_iterations = 1'000'000);

/// Order-3 ternary model with five classes used throughout the experiments.
PartitionModel example_model();

/// Contexts {0, 1, 12, 102, 202, 22, 002}: a VLMC tree whose partition
/// refines example_model()'s.
ContextTree example_tree();

/// Contexts {0, 01, 011, 111} over {0, 1}.
ContextTree binary_example_tree();

/// Seed, algorithm, burn-in and model hash for a generated sequence.
nlohmann::json simulation_metadata(const PartitionModel& model, const GeneratorConfig& cfg);

}  // namespace mmm
