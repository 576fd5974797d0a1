#ifndef SAOCDS_RUNNER_HPP
#define SAOCDS_RUNNER_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "saocds/counters.hpp"
#include "saocds/metrics.hpp"
#include "saocds/network.hpp"
#include "saocds/spike_tensor.hpp"

namespace saocds {

enum class ExecutionMode {
    Sequential,  // layer by layer per timestep, materialized rows
    Pipelined,   // one thread per layer, bounded row queues in between
};

struct RunOptions {
    ExecutionMode mode = ExecutionMode::Pipelined;
    std::size_t queue_depth_rows = 2;
    bool capture_layer_outputs = false;
};

struct RunResult {
    SpikeTensor output;
    std::vector<CostCounters> layer_counters;
    std::vector<SpikeTensor> layer_outputs;   // only when captured
    std::vector<double> final_potentials;     // last layer, after the last timestep, when readout is on
    LatencyReport latency;

    CostCounters total() const {
        CostCounters c;
        for (const auto& l : layer_counters) c += l;
        return c;
    }
};

/// Runs the network with the streaming engines: conv layers in output-channel
/// dataflow, FC layers with weight/fetch masks, binary max pooling. Every
/// layer consumes rows in input-channel order and emits rows in
/// output-channel order; no stage sees more than its neighbours' rows.
RunResult saocds_network_run(const NetworkSpec& net, const SpikeTensor& input, const RunOptions& options = {});

struct SpikeMismatch {
    std::size_t t = 0, layer = 0, channel = 0, pixel = 0;

    friend constexpr bool operator==(const SpikeMismatch&, const SpikeMismatch&) = default;
};

/// First differing spike over (t, layer, channel, pixel), using the captured
/// layer outputs of both runs. Throws DimensionError if either run was not
/// captured or the shapes differ.
std::optional<SpikeMismatch> first_spike_mismatch(const RunResult& a, const RunResult& b);

} // namespace saocds

#endif
