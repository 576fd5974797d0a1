#ifndef SAOCDS_SWEEP_HPP
#define SAOCDS_SWEEP_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saocds/network.hpp"

namespace saocds {

/// "0.05..1.0" (step 0.05), "0.1..0.9:0.1", or a comma list "0.1,0.5,1".
std::vector<double> parse_density_list(std::string_view text);

struct SweepConfig {
    std::vector<double> densities;
    double rate = 0.5;           // Bernoulli input fire rate
    std::size_t timesteps = 8;
    std::uint64_t seed = 1;      // input seed; the same input is used at every density
    bool parallel = false;       // one density per OpenMP thread
};

struct SweepRow {
    double density = 0.0;
    std::size_t layer = 0;
    std::string name;
    LayerKind kind = LayerKind::Conv;
    std::size_t weights = 0;
    std::size_t nnz = 0;
    std::uint64_t accum_streaming = 0;
    std::uint64_t accum_sliding = 0;
    std::optional<double> accum_ratio;
    std::uint64_t cycles = 0;    // per timestep
    std::uint64_t empty = 0;     // per timestep
    std::uint64_t extra = 0;
    bool bottleneck = false;
    bool fc_bound = false;
    std::uint64_t total_cycles = 0;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Prunes the network to each density, runs both engines on the same
/// Bernoulli input and reports per-layer accumulation ratios and cycles.
/// The serial and parallel paths give identical rows.
std::vector<SweepRow> density_sweep(const NetworkSpec& dense, const SweepConfig& cfg);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct OverheadTrial {
    std::uint64_t seed = 0;
    std::vector<std::size_t> conv_layers;     // layer indices
    std::vector<std::size_t> empty_extra;     // per conv layer, per timestep
    std::uint64_t conv_iterations = 0;        // sum of reps over conv layers
    std::uint64_t dense_conv_iterations = 0;

    friend bool operator==(const OverheadTrial&, const OverheadTrial&) = default;
};

/// Builds a fresh random network per trial (seed base_seed + i), prunes it
/// uniformly and counts the schedule overhead of every conv layer.
std::vector<OverheadTrial> overhead_trials(const std::function<NetworkSpec(std::uint64_t)>& make, double density,
                                           std::size_t trials, std::uint64_t base_seed, bool parallel = false);

/// Threads OpenMP would use, 1 when built without it.
int parallel_threads();

} // namespace saocds

#endif
