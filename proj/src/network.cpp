#include "saocds/network.hpp"

#include <cmath>

#include "saocds/error.hpp"
#include "saocds/rng.hpp"

namespace saocds {

const char* to_string(LayerKind k) {
    switch (k) {
    case LayerKind::Conv: return "conv";
    case LayerKind::MaxPool: return "maxpool";
    case LayerKind::Fc: return "fc";
    }
    return "?";
}

LayerKind LayerSpec::kind() const {
    switch (body.index()) {
    case 0: return LayerKind::Conv;
    case 1: return LayerKind::MaxPool;
    default: return LayerKind::Fc;
    }
}

Shape LayerSpec::output_shape(const Shape& in) const {
    const std::string where = "layer '" + name + "': ";
    switch (kind()) {
    case LayerKind::Conv: {
        const ConvLayer& c = conv();
        if (in.channels != c.dims.ic)
            throw DimensionError(where + "expects " + std::to_string(c.dims.ic) + " input channels, upstream has " +
                                 std::to_string(in.channels));
        if (in.width + 2 * c.pad != c.dims.in_w())
            throw DimensionError(where + "input width " + std::to_string(in.width) + " + 2*pad " +
                                 std::to_string(c.pad) + " does not equal padded width " +
                                 std::to_string(c.dims.in_w()));
        return Shape{c.dims.oc, c.dims.oi};
    }
    case LayerKind::MaxPool: {
        const std::size_t w = pool().window;
        if (w == 0 || in.width < w)
            throw DimensionError(where + "pool window " + std::to_string(w) + " does not fit width " +
                                 std::to_string(in.width));
        return Shape{in.channels, in.width / w};
    }
    case LayerKind::Fc: {
        const MaskedFcWeights& w = fc().weights;
        if (in.channels * in.width != w.in())
            throw DimensionError(where + "expects " + std::to_string(w.in()) + " inputs, upstream provides " +
                                 std::to_string(in.channels * in.width));
        return Shape{1, w.out()};
    }
    }
    return {};
}

std::size_t LayerSpec::neurons() const {
    switch (kind()) {
    case LayerKind::Conv: return conv().dims.oc * conv().dims.oi;
    case LayerKind::Fc: return fc().weights.out();
    default: return 0;
    }
}

std::size_t LayerSpec::weight_count() const {
    switch (kind()) {
    case LayerKind::Conv: return conv().dims.weight_count();
    case LayerKind::Fc: return fc().weights.out() * fc().weights.in();
    default: return 0;
    }
}

std::size_t LayerSpec::nnz() const {
    switch (kind()) {
    case LayerKind::Conv: return conv().kernel.nnz();
    case LayerKind::Fc: return fc().weights.nnz();
    default: return 0;
    }
}

std::vector<Shape> NetworkSpec::shapes() const {
    std::vector<Shape> out;
    out.reserve(layers.size() + 1);
    out.push_back(input);
    for (const LayerSpec& l : layers) out.push_back(l.output_shape(out.back()));
    return out;
}

std::vector<std::size_t> NetworkSpec::weighted_layers() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < layers.size(); ++i)
        if (layers[i].weighted()) idx.push_back(i);
    return idx;
}

void NetworkSpec::validate() const {
    check_frac_bits(frac_bits);
    if (d_bits <= 0 || d_bits > 16) throw ConfigError("weight width must be in [1, 16] bits");
    if (input.channels == 0 || input.width == 0) throw DimensionError("network input shape must be positive");
    if (layers.empty()) throw ConfigError("network has no layers");
    shapes();
    for (const LayerSpec& l : layers) {
        if (l.kind() == LayerKind::Conv) {
            const ConvLayer& c = l.conv();
            if (!(c.kernel.dims() == c.dims)) throw DimensionError("layer '" + l.name + "': kernel dims differ");
            if (2 * c.pad >= c.dims.in_w()) throw DimensionError("layer '" + l.name + "': padding too large");
            if (!(build_schedule(c.kernel) == c.schedule))
                throw ScheduleError("layer '" + l.name + "': iteration schedule does not match kernel");
        }
        if (l.weighted()) l.neuron.validate(l.neurons(), frac_bits);
    }
}

ConvLayer make_conv(SparseKernelCOO kernel, std::size_t pad) {
    ConvLayer c;
    c.dims = kernel.dims();
    c.pad = pad;
    c.schedule = build_schedule(kernel);
    c.kernel = std::move(kernel);
    return c;
}

LayerSpec conv_layer(std::string name, SparseKernelCOO kernel, std::size_t pad, LayerNeuronParams neuron) {
    return LayerSpec{std::move(name), make_conv(std::move(kernel), pad), std::move(neuron), std::nullopt};
}

LayerSpec pool_layer(std::string name, std::size_t window) {
    return LayerSpec{std::move(name), PoolLayer{window}, {}, std::nullopt};
}

LayerSpec fc_layer(std::string name, MaskedFcWeights weights, LayerNeuronParams neuron) {
    return LayerSpec{std::move(name), FcLayer{std::move(weights)}, std::move(neuron), std::nullopt};
}

LayerNeuronParams uniform_neuron(double alpha, double theta, double u_th0, int frac_bits) {
    LayerNeuronParams p;
    p.defaults = NeuronParams{quantize(alpha, frac_bits), quantize(theta, frac_bits), quantize(u_th0, frac_bits)};
    return p;
}

std::vector<FixedPoint16> random_weights(std::uint64_t seed, std::size_t count, std::size_t fan_in, double gain,
                                         int frac_bits) {
    if (fan_in == 0) throw DimensionError("random weights need a positive fan-in");
    Rng rng(seed);
    const double sigma = gain / std::sqrt(static_cast<double>(fan_in));
    std::vector<FixedPoint16> w(count);
    for (auto& x : w) {
        x = quantize(sigma * rng.normal(), frac_bits);
        // keep the kernel fully dense so density 1.0 really means every weight
        if (x.raw == 0) x.raw = rng.bernoulli(0.5) ? 1 : -1;
    }
    return w;
}

NetworkSpec default_network(const RandomWeightConfig& cfg, int frac_bits) {
    NetworkSpec net;
    net.frac_bits = frac_bits;
    net.input = Shape{2, 128};
    const LayerNeuronParams neuron = uniform_neuron(0.75, 0.5, 0.5, frac_bits);

    auto conv = [&](const char* name, std::size_t kw, std::size_t ic, std::size_t oc, std::size_t width) {
        const ConvDims d{kw, ic, oc, width};
        auto w = random_weights(layer_seed(cfg.seed, net.layers.size()), d.weight_count(), kw * ic, cfg.gain, frac_bits);
        net.layers.push_back(conv_layer(name, coo_encode(DenseKernel(d, std::move(w))), (kw - 1) / 2, neuron));
    };
    conv("conv1", 11, 2, 16, 128);
    net.layers.push_back(pool_layer("pool1", 2));
    conv("conv2", 11, 16, 32, 64);
    net.layers.push_back(pool_layer("pool2", 2));
    conv("conv3", 5, 32, 64, 32);
    net.layers.push_back(pool_layer("pool3", 2));

    auto fc = [&](const char* name, std::size_t in, std::size_t out) {
        auto w = random_weights(layer_seed(cfg.seed, net.layers.size()), in * out, in, cfg.gain, frac_bits);
        net.layers.push_back(fc_layer(name, MaskedFcWeights(out, in, std::move(w)), neuron));
    };
    fc("fc1", 64 * 16, 128);
    fc("fc2", 128, 11);
    net.validate();
    return net;
}

NetworkSpec single_conv_network(const ConvDims& dims, const RandomWeightConfig& cfg, int frac_bits) {
    dims.validate();
    if (dims.kw % 2 == 0) throw DimensionError("same padding needs an odd kernel width");
    NetworkSpec net;
    net.frac_bits = frac_bits;
    net.input = Shape{dims.ic, dims.oi};
    auto w = random_weights(layer_seed(cfg.seed, 0), dims.weight_count(), dims.kw * dims.ic, cfg.gain, frac_bits);
    net.layers.push_back(conv_layer("conv", coo_encode(DenseKernel(dims, std::move(w))), (dims.kw - 1) / 2,
                                    uniform_neuron(0.75, 0.5, 0.5, frac_bits)));
    net.validate();
    return net;
}

NetworkSpec small_conv_example() {
    NetworkSpec net;
    net.frac_bits = kDefaultFracBits;
    net.input = Shape{2, 6};
    const ConvDims d{3, 2, 4, 4};
    DenseKernel k(d);
    for (std::size_t oc = 0; oc < d.oc; ++oc) {
        k.at(oc, 0, 0) = quantize(1.0, net.frac_bits);
        k.at(oc, 0, 1) = quantize(0.75, net.frac_bits);
        k.at(oc, 1, 0) = quantize(-0.5, net.frac_bits);
    }
    net.layers.push_back(conv_layer("conv", coo_encode(k), 0, uniform_neuron(0.5, 1.0, 1.0, net.frac_bits)));
    net.validate();
    return net;
}

} // namespace saocds
