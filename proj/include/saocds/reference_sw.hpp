#ifndef SAOCDS_REFERENCE_SW_HPP
#define SAOCDS_REFERENCE_SW_HPP

#include <span>
#include <vector>

#include "saocds/core_model.hpp"
#include "saocds/counters.hpp"
#include "saocds/fc_mvtu.hpp"
#include "saocds/lif.hpp"
#include "saocds/network.hpp"
#include "saocds/runner.hpp"
#include "saocds/spike_tensor.hpp"

namespace saocds {

// Dense sliding-window engine. Functional oracle for the streaming engine
// and the cost baseline that only exploits temporal sparsity. Written for
// clarity, not speed.

/// One conv timestep over the full padded IFM ([ic] rows of width in_w).
/// Per output pixel the (kw x ic) input window is fetched once and shared by
/// all output channels; every output channel fetches all kw x ic weights and
/// accumulates wherever the input bit is 1, zero weights included.
std::vector<SpikeRow> sw_conv_timestep(std::span<const SpikeRow> padded_ifm, const DenseKernel& kernel,
                                       PotentialBank& bank, const LayerNeuronParams& params, int frac_bits,
                                       int d_bits, CostCounters& counters);

/// Dense FC: every active input fetches and accumulates its weight, zero or
/// not (input-priority baseline).
SpikeRow sw_fc_timestep(std::span<const std::uint8_t> ifm, const MaskedFcWeights& w, PotentialBank& bank,
                        const LayerNeuronParams& params, int frac_bits, int d_bits, CostCounters& counters);

/// Layer-by-layer execution with materialized intermediates.
RunResult sw_network_run(const NetworkSpec& net, const SpikeTensor& input, bool capture_layer_outputs = false);

} // namespace saocds

#endif
