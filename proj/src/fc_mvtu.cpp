#include "saocds/fc_mvtu.hpp"

#include <algorithm>
#include <string>

#include "saocds/error.hpp"

namespace saocds {

MaskedFcWeights::MaskedFcWeights(std::size_t out, std::size_t in, std::vector<FixedPoint16> weights)
    : out_(out), in_(in), weights_(std::move(weights)) {
    if (out_ == 0 || in_ == 0) throw DimensionError("FC layer needs positive in/out widths");
    if (weights_.size() != out_ * in_)
        throw DimensionError("FC weights have " + std::to_string(weights_.size()) + " values, expected " +
                             std::to_string(out_ * in_));
    mask_.resize(weights_.size());
    std::transform(weights_.begin(), weights_.end(), mask_.begin(),
                   [](FixedPoint16 w) -> std::uint8_t { return w.raw != 0 ? 1 : 0; });
}

std::size_t MaskedFcWeights::nnz() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

std::vector<std::uint8_t> fetch_mask(std::span<const std::uint8_t> ifm, std::span<const std::uint8_t> wm) {
    if (ifm.size() != wm.size()) throw DimensionError("input and weight mask widths differ");
    std::vector<std::uint8_t> fm(ifm.size());
    for (std::size_t i = 0; i < ifm.size(); ++i) fm[i] = (ifm[i] & wm[i]) ? 1 : 0;
    return fm;
}

SpikeRow fc_timestep(std::span<const std::uint8_t> ifm, const MaskedFcWeights& w, PotentialBank& bank,
                     const LayerNeuronParams& params, int frac_bits, int d_bits, CostCounters& counters) {
    if (ifm.size() != w.in())
        throw DimensionError("FC input has width " + std::to_string(ifm.size()) + ", layer expects " +
                             std::to_string(w.in()));
    if (bank.size() != w.out()) throw DimensionError("FC potential bank size does not match output width");

    SpikeRow out(w.out(), 0);
    for (std::size_t o = 0; o < w.out(); ++o) {
        const NeuronParams p = params.at(o);
        NeuronState s = lif_begin_timestep(bank[o], p, frac_bits);
        ++counters.bank_loads;
        counters.input_fetches += w.in();
        counters.input_bits += w.in();

        const auto wm = w.mask_row(o);
        const auto wr = w.weight_row(o);
        for (std::size_t i = 0; i < w.in(); ++i) {
            if (ifm[i] & wm[i]) {
                ++counters.weight_fetches;
                counters.weight_bits += static_cast<std::uint64_t>(d_bits);
                ++counters.accumulations;
                s.v = sat_add(s.v, wr[i].raw);
            }
        }
        const FireResult f = lif_fire(s, p);
        out[o] = f.spike ? 1 : 0;
        bank[o] = f.state;
        ++counters.bank_stores;
    }
    return out;
}

SpikeRow maxpool_row(std::span<const std::uint8_t> in, std::size_t window, CostCounters& counters) {
    if (window == 0) throw DimensionError("pool window must be positive");
    if (in.size() < window) throw DimensionError("pool window wider than row");
    SpikeRow out(in.size() / window, 0);
    for (std::size_t x = 0; x < out.size(); ++x) {
        std::uint8_t v = 0;
        for (std::size_t k = 0; k < window; ++k) v |= in[x * window + k];
        out[x] = v ? 1 : 0;
    }
    counters.input_fetches += out.size() * window;
    counters.input_bits += out.size() * window;
    ++counters.rows_read;
    return out;
}

} // namespace saocds
