#ifndef SAOCDS_FC_MVTU_HPP
#define SAOCDS_FC_MVTU_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "saocds/counters.hpp"
#include "saocds/fixed_point.hpp"
#include "saocds/lif.hpp"
#include "saocds/spike_tensor.hpp"

namespace saocds {

/// Dense FC weights [out][in] plus the 1-bit nonzero mask the engine streams
/// instead of the 16-bit values.
class MaskedFcWeights {
public:
    MaskedFcWeights() = default;
    MaskedFcWeights(std::size_t out, std::size_t in, std::vector<FixedPoint16> weights);

    std::size_t out() const { return out_; }
    std::size_t in() const { return in_; }
    FixedPoint16 at(std::size_t o, std::size_t i) const { return weights_[o * in_ + i]; }
    std::span<const FixedPoint16> weights() const { return weights_; }
    std::span<const FixedPoint16> weight_row(std::size_t o) const {
        return std::span<const FixedPoint16>(weights_).subspan(o * in_, in_);
    }
    std::span<const std::uint8_t> mask_row(std::size_t o) const {
        return std::span<const std::uint8_t>(mask_).subspan(o * in_, in_);
    }
    std::span<const std::uint8_t> mask() const { return mask_; }

    std::size_t nnz() const;
    std::uint64_t mask_storage_bits() const { return static_cast<std::uint64_t>(out_) * in_; }

    friend bool operator==(const MaskedFcWeights&, const MaskedFcWeights&) = default;

private:
    std::size_t out_ = 0, in_ = 0;
    std::vector<FixedPoint16> weights_;
    std::vector<std::uint8_t> mask_;
};

/// fm = ifm AND wm, elementwise.
std::vector<std::uint8_t> fetch_mask(std::span<const std::uint8_t> ifm, std::span<const std::uint8_t> wm);

/// One timestep of an FC layer under the weight-mask scheme: per neuron,
/// decay, accumulate only the weights selected by the fetch mask, fire.
SpikeRow fc_timestep(std::span<const std::uint8_t> ifm, const MaskedFcWeights& w, PotentialBank& bank,
                     const LayerNeuronParams& params, int frac_bits, int d_bits, CostCounters& counters);

/// Binary max pooling: OR over non-overlapping windows; trailing pixels that
/// do not fill a window are dropped.
SpikeRow maxpool_row(std::span<const std::uint8_t> in, std::size_t window, CostCounters& counters);

} // namespace saocds

#endif
