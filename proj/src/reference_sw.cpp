#include "saocds/reference_sw.hpp"

#include <string>

#include "saocds/error.hpp"
#include "saocds/metrics.hpp"

namespace saocds {

std::vector<SpikeRow> sw_conv_timestep(std::span<const SpikeRow> padded_ifm, const DenseKernel& kernel,
                                       PotentialBank& bank, const LayerNeuronParams& params, int frac_bits,
                                       int d_bits, CostCounters& counters) {
    const ConvDims& d = kernel.dims;
    if (padded_ifm.size() != d.ic) throw DimensionError("SW: IFM channel count does not match kernel");
    for (const SpikeRow& r : padded_ifm)
        if (r.size() != d.in_w()) throw DimensionError("SW: IFM row width does not match padded width");
    if (bank.rows() != d.oc || bank.cols() != d.oi) throw DimensionError("SW: potential bank is not OC x OI");

    auto p_at = [&](std::size_t oc, std::size_t oi) { return params.at(oc * d.oi + oi); };

    for (std::size_t oc = 0; oc < d.oc; ++oc) {
        auto row = bank.row(oc);
        for (std::size_t oi = 0; oi < d.oi; ++oi) row[oi] = lif_begin_timestep(row[oi], p_at(oc, oi), frac_bits);
    }
    counters.bank_loads += d.oc;
    counters.rows_read += d.ic;

    for (std::size_t oi = 0; oi < d.oi; ++oi) {
        counters.input_fetches += d.kw * d.ic;
        counters.input_bits += d.kw * d.ic;
        for (std::size_t oc = 0; oc < d.oc; ++oc) {
            NeuronState& s = bank.row(oc)[oi];
            for (std::size_t ic = 0; ic < d.ic; ++ic) {
                for (std::size_t ci = 0; ci < d.kw; ++ci) {
                    ++counters.weight_fetches;
                    counters.weight_bits += static_cast<std::uint64_t>(d_bits);
                    if (padded_ifm[ic][oi + ci]) {
                        s.v = sat_add(s.v, kernel.at(oc, ic, ci).raw);
                        ++counters.accumulations;
                    }
                }
            }
        }
    }

    std::vector<SpikeRow> out(d.oc, SpikeRow(d.oi, 0));
    for (std::size_t oc = 0; oc < d.oc; ++oc) {
        auto row = bank.row(oc);
        for (std::size_t oi = 0; oi < d.oi; ++oi) {
            const FireResult f = lif_fire(row[oi], p_at(oc, oi));
            out[oc][oi] = f.spike ? 1 : 0;
            row[oi] = f.state;
        }
    }
    counters.bank_stores += d.oc;
    return out;
}

SpikeRow sw_fc_timestep(std::span<const std::uint8_t> ifm, const MaskedFcWeights& w, PotentialBank& bank,
                        const LayerNeuronParams& params, int frac_bits, int d_bits, CostCounters& counters) {
    if (ifm.size() != w.in()) throw DimensionError("SW: FC input width mismatch");
    if (bank.size() != w.out()) throw DimensionError("SW: FC bank size mismatch");
    SpikeRow out(w.out(), 0);
    for (std::size_t o = 0; o < w.out(); ++o) {
        const NeuronParams p = params.at(o);
        NeuronState s = lif_begin_timestep(bank[o], p, frac_bits);
        counters.input_fetches += w.in();
        counters.input_bits += w.in();
        for (std::size_t i = 0; i < w.in(); ++i) {
            if (ifm[i]) {
                ++counters.weight_fetches;
                counters.weight_bits += static_cast<std::uint64_t>(d_bits);
                ++counters.accumulations;
                s.v = sat_add(s.v, w.at(o, i).raw);
            }
        }
        const FireResult f = lif_fire(s, p);
        out[o] = f.spike ? 1 : 0;
        bank[o] = f.state;
    }
    counters.bank_loads += w.out();
    counters.bank_stores += w.out();
    return out;
}

RunResult sw_network_run(const NetworkSpec& net, const SpikeTensor& input, bool capture_layer_outputs) {
    net.validate();
    const std::vector<Shape> shapes = net.shapes();
    if (input.channels() != net.input.channels || input.width() != net.input.width)
        throw DimensionError("input tensor is (" + std::to_string(input.channels()) + ", " +
                             std::to_string(input.width()) + "), network expects (" +
                             std::to_string(net.input.channels) + ", " + std::to_string(net.input.width) + ")");
    const std::size_t T = input.timesteps();
    const std::size_t L = net.layers.size();

    std::vector<DenseKernel> dense(L);
    std::vector<PotentialBank> banks(L);
    for (std::size_t l = 0; l < L; ++l) {
        const LayerSpec& layer = net.layers[l];
        if (layer.kind() == LayerKind::Conv) {
            dense[l] = coo_decode(layer.conv().kernel);
            banks[l] = PotentialBank(layer.conv().dims.oc, layer.conv().dims.oi);
        } else if (layer.kind() == LayerKind::Fc) {
            banks[l] = PotentialBank(1, layer.fc().weights.out());
        }
    }

    RunResult result;
    result.layer_counters.assign(L, CostCounters{});
    result.output = SpikeTensor(T, shapes.back().channels, shapes.back().width);
    if (capture_layer_outputs)
        for (std::size_t l = 0; l < L; ++l)
            result.layer_outputs.emplace_back(T, shapes[l + 1].channels, shapes[l + 1].width);

    for (std::size_t t = 0; t < T; ++t) {
        std::vector<SpikeRow> rows;
        for (std::size_t c = 0; c < input.channels(); ++c) {
            const auto r = input.row(t, c);
            rows.emplace_back(r.begin(), r.end());
        }
        for (std::size_t l = 0; l < L; ++l) {
            const LayerSpec& layer = net.layers[l];
            CostCounters& cnt = result.layer_counters[l];
            std::vector<SpikeRow> next;
            switch (layer.kind()) {
            case LayerKind::Conv: {
                const ConvLayer& c = layer.conv();
                std::vector<SpikeRow> padded;
                for (const SpikeRow& r : rows) {
                    SpikeRow p(c.dims.in_w(), 0);
                    std::copy(r.begin(), r.end(), p.begin() + static_cast<std::ptrdiff_t>(c.pad));
                    padded.push_back(std::move(p));
                }
                next = sw_conv_timestep(padded, dense[l], banks[l], layer.neuron, net.frac_bits, net.d_bits, cnt);
                break;
            }
            case LayerKind::MaxPool:
                for (const SpikeRow& r : rows) next.push_back(maxpool_row(r, layer.pool().window, cnt));
                break;
            case LayerKind::Fc: {
                SpikeRow flat;
                for (const SpikeRow& r : rows) flat.insert(flat.end(), r.begin(), r.end());
                cnt.rows_read += rows.size();
                next.push_back(sw_fc_timestep(flat, layer.fc().weights, banks[l], layer.neuron, net.frac_bits,
                                              net.d_bits, cnt));
                break;
            }
            }
            rows = std::move(next);
            if (capture_layer_outputs)
                for (std::size_t c = 0; c < rows.size(); ++c) result.layer_outputs[l].set_row(t, c, rows[c]);
        }
        for (std::size_t c = 0; c < rows.size(); ++c) result.output.set_row(t, c, rows[c]);
    }

    if (net.readout_potentials && L > 0) {
        for (const NeuronState& s : banks[L - 1].states()) result.final_potentials.push_back(to_double(s.v, net.frac_bits));
    }
    result.latency = latency_model(net, T);
    return result;
}

} // namespace saocds
