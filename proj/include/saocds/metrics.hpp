#ifndef SAOCDS_METRICS_HPP
#define SAOCDS_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saocds/counters.hpp"
#include "saocds/network.hpp"

namespace saocds {

struct LayerLatency {
    std::size_t layer = 0;
    std::string name;
    LayerKind kind = LayerKind::Conv;
    std::uint64_t cycles = 0;  // per timestep
};

/// Iteration-count latency model. One schedule iteration is one cycle for
/// conv layers, one input bit is one cycle for FC layers (the weight mask
/// saves fetches, not cycles), one input pixel is one cycle for pooling.
struct LatencyReport {
    std::vector<LayerLatency> layers;
    std::size_t bottleneck = 0;         // argmax of cycles, first on ties
    std::uint64_t max_stage_cycles = 0;
    std::uint64_t max_conv_cycles = 0;
    std::uint64_t fill_cycles = 0;      // sum over the non-bottleneck stages
    std::uint64_t total_cycles = 0;     // fill + T * max_stage_cycles
    std::size_t timesteps = 0;
    bool fc_bound = false;              // an FC stage exceeds every conv stage
    double throughput_proxy = 0.0;      // timesteps per cycle in steady state
};

std::uint64_t layer_cycles(const LayerSpec& layer, const Shape& in);

LatencyReport latency_model(const NetworkSpec& net, std::size_t timesteps);

/// Per layer: streaming accumulations / dense sliding-window accumulations.
/// Absent where the dense run did no accumulation.
std::vector<std::optional<double>> accumulation_ratio(std::span<const CostCounters> sparse,
                                                      std::span<const CostCounters> dense);

/// #LUT * dynamic power / throughput. With watts and samples per second the
/// result is joules per sample; multiply by kMicro for uJ/S.
double fom(double lut_count, double dynamic_power_w, double throughput_s_per_s);

inline constexpr double kMicro = 1e6;

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Storage and schedule figures of one layer. Storage fields are only
/// meaningful for conv layers; FC layers report their weight-mask overhead.
struct LayerAnalysis {
    std::size_t layer = 0;
    std::string name;
    LayerKind kind = LayerKind::Conv;
    std::size_t weights = 0;
    std::size_t nnz = 0;
    double density = 0.0;
    StorageWidths widths;
    std::uint64_t dense_bits = 0;
    std::uint64_t coo_bits = 0;
    std::uint64_t coo_bits_per_unit_density = 0;
    double break_even = 0.0;
    std::uint64_t mask_bits = 0;  // FC
    std::size_t reps = 0;
    std::size_t empty = 0;
    std::size_t extra = 0;
    std::uint64_t cycles = 0;
};

struct NetworkAnalysis {
    std::vector<LayerAnalysis> layers;
    LatencyReport latency;  // for one timestep
};

NetworkAnalysis analyze_network(const NetworkSpec& net);

} // namespace saocds

#endif
