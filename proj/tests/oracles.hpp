// Independent reference implementations used by the tests. Nothing here
// calls into the engines; they only share the plain data types.
#ifndef SAOCDS_TESTS_ORACLES_HPP
#define SAOCDS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "saocds/core_model.hpp"
#include "saocds/network.hpp"
#include "saocds/rng.hpp"
#include "saocds/spike_tensor.hpp"

namespace oracle {

// ---- fixed point --------------------------------------------------------

// p / 2^shift rounded to nearest, ties to even, via floor division.
inline std::int64_t round_div_pow2(std::int64_t p, int shift) {
    if (shift == 0) return p;
    const std::int64_t den = std::int64_t{1} << shift;
    std::int64_t q = p / den;
    std::int64_t r = p % den;
    if (r < 0) {
        q -= 1;
        r += den;
    }
    if (2 * r > den || (2 * r == den && (q & 1))) q += 1;
    return q;
}

struct Lif {
    std::int64_t alpha, theta, u_th0;
};

struct Neuron {
    std::int64_t v = 0;
    bool s = false;
};

// Update: v <- round(alpha * v) - theta * s_prev + inputs; fire iff v > u_th0.
inline void lif_decay(Neuron& n, const Lif& p, int frac_bits) {
    n.v = round_div_pow2(p.alpha * n.v, frac_bits) - (n.s ? p.theta : 0);
}

inline bool lif_fire(Neuron& n, const Lif& p) {
    if (n.v > INT32_MAX || n.v < INT32_MIN) throw std::runtime_error("oracle potential left the 32-bit range");
    n.s = n.v > p.u_th0;
    return n.s;
}

inline Lif lif_of(const saocds::LayerNeuronParams& p, std::size_t neuron) {
    const saocds::NeuronParams q = p.at(neuron);
    return Lif{q.alpha.raw, q.theta.raw, q.u_th0.raw};
}

// ---- schedule -----------------------------------------------------------

enum class Tag { Normal, Empty, Extra };

// Literal walk of the streaming control loop: one input channel becomes
// readable per iteration; the pending nonzero either runs (its channel is
// readable and it belongs to the current output channel), waits (Empty), or
// the current output channel owns nothing and is flushed (Extra).
// `entries` are (oc, ic, ci) in streaming order.
inline std::vector<Tag> schedule(const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& entries,
                                 std::size_t n_ic, std::size_t n_oc) {
    std::vector<Tag> tags;
    std::size_t readable = 0, cur_oc = 0, next = 0;
    bool done = n_oc == 0;
    while (!done) {
        if (readable < n_ic) ++readable;
        const bool have = next < entries.size();
        const std::size_t want_oc = have ? std::get<0>(entries[next]) : n_oc;
        if (want_oc != cur_oc) {
            tags.push_back(Tag::Extra);
            ++cur_oc;
        } else if (std::get<1>(entries[next]) + 1 <= readable) {
            tags.push_back(Tag::Normal);
            ++next;
            const std::size_t after = next < entries.size() ? std::get<0>(entries[next]) : n_oc;
            if (after != cur_oc) ++cur_oc;
        } else {
            tags.push_back(Tag::Empty);
        }
        done = cur_oc == n_oc;
    }
    return tags;
}

inline std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> coords(const saocds::SparseKernelCOO& k) {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
    for (std::size_t n = 0; n < k.nnz(); ++n) out.emplace_back(k.oc_of(n), k.ic_of(n), k.entries()[n].ci);
    return out;
}

// ---- dense network -------------------------------------------------------

// Straight loops over dense weights, int64 potentials, its own LIF.
inline saocds::SpikeTensor network_run(const saocds::NetworkSpec& net, const saocds::SpikeTensor& input) {
    using namespace saocds;
    const std::vector<Shape> shapes = net.shapes();
    const std::size_t T = input.timesteps();
    const int f = net.frac_bits;

    std::vector<std::vector<Neuron>> state(net.layers.size());
    std::vector<DenseKernel> dense(net.layers.size());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        state[l].resize(net.layers[l].weighted() ? net.layers[l].neurons() : 0);
        if (net.layers[l].kind() == LayerKind::Conv) dense[l] = coo_decode(net.layers[l].conv().kernel);
    }

    SpikeTensor out(T, shapes.back().channels, shapes.back().width);
    for (std::size_t t = 0; t < T; ++t) {
        // cur[c][x]
        std::vector<std::vector<int>> cur(input.channels(), std::vector<int>(input.width()));
        for (std::size_t c = 0; c < input.channels(); ++c)
            for (std::size_t x = 0; x < input.width(); ++x) cur[c][x] = input.at(t, c, x);

        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            const LayerSpec& layer = net.layers[l];
            std::vector<std::vector<int>> nxt;
            if (layer.kind() == LayerKind::Conv) {
                const ConvLayer& cv = layer.conv();
                const auto& d = cv.dims;
                nxt.assign(d.oc, std::vector<int>(d.oi, 0));
                for (std::size_t oc = 0; oc < d.oc; ++oc)
                    for (std::size_t oi = 0; oi < d.oi; ++oi) {
                        Neuron& n = state[l][oc * d.oi + oi];
                        const Lif p = lif_of(layer.neuron, oc * d.oi + oi);
                        lif_decay(n, p, f);
                        for (std::size_t ic = 0; ic < d.ic; ++ic)
                            for (std::size_t ci = 0; ci < d.kw; ++ci) {
                                // padded position oi + ci is raw position oi + ci - pad
                                const long x = static_cast<long>(oi + ci) - static_cast<long>(cv.pad);
                                if (x < 0 || x >= static_cast<long>(cur[ic].size())) continue;
                                if (cur[ic][static_cast<std::size_t>(x)]) n.v += dense[l].at(oc, ic, ci).raw;
                            }
                        nxt[oc][oi] = lif_fire(n, p) ? 1 : 0;
                    }
            } else if (layer.kind() == LayerKind::MaxPool) {
                const std::size_t w = layer.pool().window;
                for (const auto& row : cur) {
                    std::vector<int> o(row.size() / w, 0);
                    for (std::size_t i = 0; i < o.size(); ++i)
                        for (std::size_t k = 0; k < w; ++k) o[i] |= row[i * w + k];
                    nxt.push_back(o);
                }
            } else {
                const MaskedFcWeights& w = layer.fc().weights;
                std::vector<int> flat;
                for (const auto& row : cur) flat.insert(flat.end(), row.begin(), row.end());
                nxt.assign(1, std::vector<int>(w.out(), 0));
                for (std::size_t o = 0; o < w.out(); ++o) {
                    Neuron& n = state[l][o];
                    const Lif p = lif_of(layer.neuron, o);
                    lif_decay(n, p, f);
                    for (std::size_t i = 0; i < w.in(); ++i)
                        if (flat[i]) n.v += w.at(o, i).raw;
                    nxt[0][o] = lif_fire(n, p) ? 1 : 0;
                }
            }
            cur = std::move(nxt);
        }
        for (std::size_t c = 0; c < cur.size(); ++c)
            for (std::size_t x = 0; x < cur[c].size(); ++x) out.set(t, c, x, cur[c][x] != 0);
    }
    return out;
}

// ---- random instances ------------------------------------------------------

inline saocds::FixedPoint16 random_weight(saocds::Rng& rng, double scale, int frac_bits) {
    saocds::FixedPoint16 w = saocds::quantize(scale * rng.normal(), frac_bits);
    if (w.raw == 0) w.raw = 1;
    return w;
}

inline saocds::LayerNeuronParams random_neuron(saocds::Rng& rng, int frac_bits, std::size_t neurons,
                                               bool per_neuron) {
    using namespace saocds;
    auto draw = [&] {
        return NeuronParams{FixedPoint16{static_cast<std::int16_t>(rng.below((1u << frac_bits) + 1))},
                            quantize(rng.uniform(0.0, 1.0), frac_bits), quantize(rng.uniform(0.0, 1.5), frac_bits)};
    };
    LayerNeuronParams p;
    p.defaults = draw();
    if (per_neuron) {
        for (std::size_t i = 0; i < neurons; ++i) {
            const NeuronParams q = draw();
            p.alpha.push_back(q.alpha);
            p.theta.push_back(q.theta);
            p.u_th0.push_back(q.u_th0);
        }
    }
    return p;
}

// Conv kernel with each weight kept with probability `density`.
inline saocds::SparseKernelCOO random_kernel(saocds::Rng& rng, const saocds::ConvDims& d, double density,
                                             int frac_bits = 8, double scale = 1.0) {
    using namespace saocds;
    DenseKernel k(d);
    for (auto& w : k.weights)
        if (rng.bernoulli(density)) w = random_weight(rng, scale, frac_bits);
    return coo_encode(k);
}

struct RandomNetLimits {
    std::size_t max_kw = 5, max_ic = 8, max_oc = 8, max_oi = 16;
};

// 1-3 conv layers with optional pooling, optionally an FC head.
inline saocds::NetworkSpec random_network(saocds::Rng& rng, double density, const RandomNetLimits& lim = {}) {
    using namespace saocds;
    NetworkSpec net;
    net.frac_bits = 8;
    const std::size_t ic0 = 1 + rng.below(lim.max_ic);
    std::size_t width = 1 + rng.below(lim.max_oi);
    net.input = Shape{ic0, width};
    std::size_t channels = ic0;
    const std::size_t n_conv = 1 + rng.below(3);
    for (std::size_t i = 0; i < n_conv; ++i) {
        ConvDims d;
        d.ic = channels;
        d.oc = 1 + rng.below(lim.max_oc);
        std::size_t pad = 0;
        for (;;) {
            d.kw = 1 + rng.below(lim.max_kw);
            pad = rng.below(d.kw);
            const long oi = static_cast<long>(width + 2 * pad) - static_cast<long>(d.kw) + 1;
            if (oi >= 1 && oi <= static_cast<long>(lim.max_oi)) {
                d.oi = static_cast<std::size_t>(oi);
                break;
            }
        }
        // kept weights grow as density falls so pruned layers still fire
        const double scale = 3.0 / std::sqrt(static_cast<double>(d.kw * d.ic) * density);
        net.layers.push_back(conv_layer("conv" + std::to_string(i), random_kernel(rng, d, density, 8, scale), pad,
                                        random_neuron(rng, 8, d.oc * d.oi, rng.bernoulli(0.3))));
        channels = d.oc;
        width = d.oi;
        if (width >= 2 && rng.bernoulli(0.3)) {
            net.layers.push_back(pool_layer("pool" + std::to_string(i), 2));
            width /= 2;
        }
    }
    if (rng.bernoulli(0.5)) {
        const std::size_t in = channels * width;
        const std::size_t out = 1 + rng.below(10);
        std::vector<FixedPoint16> w(in * out);
        const double scale = 3.0 / std::sqrt(static_cast<double>(in) * density);
        for (auto& x : w)
            if (rng.bernoulli(density)) x = random_weight(rng, scale, 8);
        net.layers.push_back(fc_layer("fc", MaskedFcWeights(out, in, std::move(w)), random_neuron(rng, 8, out, false)));
    }
    net.validate();
    return net;
}

inline saocds::SpikeTensor random_input(saocds::Rng& rng, const saocds::Shape& s, std::size_t T, double rate) {
    saocds::SpikeTensor x(T, s.channels, s.width);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t c = 0; c < s.channels; ++c)
            for (std::size_t i = 0; i < s.width; ++i) x.set(t, c, i, rng.bernoulli(rate));
    return x;
}

} // namespace oracle

#endif
