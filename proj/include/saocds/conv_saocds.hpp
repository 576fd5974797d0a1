#ifndef SAOCDS_CONV_SAOCDS_HPP
#define SAOCDS_CONV_SAOCDS_HPP

#include <cstddef>
#include <functional>
#include <optional>

#include "saocds/counters.hpp"
#include "saocds/lif.hpp"
#include "saocds/network.hpp"
#include "saocds/spike_tensor.hpp"

namespace saocds {

/// Pulls the next unpadded input channel row; nullopt means the upstream
/// stream ended.
using RowReader = std::function<std::optional<SpikeRow>()>;
/// Receives an output channel row, in channel order.
using RowWriter = std::function<void(std::size_t channel, SpikeRow&& row)>;

/// One timestep of a convolution layer in output-channel streaming order.
///
/// Walks the precomputed schedule. Every iteration first pulls the next input
/// channel row into the padded input buffer while rows remain. Normal
/// iterations gate-accumulate one nonzero weight over all OI positions,
/// loading and decaying the output channel on entry and firing, emitting and
/// storing it when the next nonzero belongs to another channel. Extra
/// iterations decay, fire and emit a channel that owns no nonzeros. Empty
/// iterations do nothing. Rows the schedule never needed are drained at the
/// end so the upstream stream stays aligned with timesteps.
///
/// Throws StreamError on underrun and ScheduleError if the schedule does not
/// belong to the kernel.
void saocds_layer_timestep(const RowReader& next_row, const ConvLayer& layer, const LayerNeuronParams& params,
                           PotentialBank& bank, int frac_bits, int d_bits, CostCounters& counters,
                           const RowWriter& emit);

} // namespace saocds

#endif
