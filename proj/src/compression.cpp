#include "saocds/compression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "saocds/error.hpp"

namespace saocds {

std::vector<std::uint8_t> prune_l1(std::span<const double> weights, double target_density) {
    if (weights.empty()) throw ConfigError("cannot prune an empty weight array");
    if (!(target_density > 0.0 && target_density <= 1.0))
        throw ConfigError("target density must be in (0, 1], got " + std::to_string(target_density));
    for (double w : weights)
        if (std::isnan(w)) throw ConfigError("cannot prune NaN weights");

    const std::size_t n = weights.size();
    const auto keep = static_cast<std::size_t>(std::llround(target_density * static_cast<double>(n)));
    std::vector<std::uint8_t> mask(n, 0);
    if (keep >= n) {
        std::fill(mask.begin(), mask.end(), 1);
        return mask;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // total order, so the top-k set is unique
    auto before = [&](std::size_t a, std::size_t b) {
        const double ma = std::fabs(weights[a]);
        const double mb = std::fabs(weights[b]);
        return ma != mb ? ma > mb : a < b;
    };
    if (keep > 0) std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep - 1), order.end(), before);
    for (std::size_t i = 0; i < keep; ++i) mask[order[i]] = 1;
    return mask;
}

std::vector<FixedPoint16> quantize_w(std::span<const double> weights, int frac_bits) {
    check_frac_bits(frac_bits);
    std::vector<FixedPoint16> q(weights.size());
    std::transform(weights.begin(), weights.end(), q.begin(), [&](double w) { return quantize(w, frac_bits); });
    return q;
}

std::vector<double> dequantize_w(std::span<const FixedPoint16> weights, int frac_bits) {
    check_frac_bits(frac_bits);
    std::vector<double> out(weights.size());
    std::transform(weights.begin(), weights.end(), out.begin(),
                   [&](FixedPoint16 w) { return to_double(w, frac_bits); });
    return out;
}

int choose_frac_bits(std::span<const double> weights) {
    int best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (int f = 0; f <= 15; ++f) {
        double err = 0.0;
        for (double w : weights) {
            const double e = w - to_double(quantize(w, f), f);
            err += e * e;
        }
        if (err <= best_err) {
            best_err = err;
            best = f;
        }
    }
    return best;
}

std::vector<double> parse_density_profile(std::string_view text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (true) {
        const std::size_t dash = text.find('-', pos);
        const std::string_view tok = text.substr(pos, dash == std::string_view::npos ? std::string_view::npos : dash - pos);
        double v = 0.0;
        const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || end != tok.data() + tok.size())
            throw ConfigError("bad density profile '" + std::string(text) + "' near '" + std::string(tok) + "'");
        values.push_back(v);
        if (dash == std::string_view::npos) break;
        pos = dash + 1;
    }
    const bool percent = std::any_of(values.begin(), values.end(), [](double v) { return v > 1.0; });
    for (double& v : values) {
        if (percent) v /= 100.0;
        if (!(v > 0.0 && v <= 1.0))
            throw ConfigError("density profile '" + std::string(text) + "' has a value outside (0, 100%]");
    }
    return values;
}

std::vector<double> layer_weights(const LayerSpec& layer, int frac_bits) {
    switch (layer.kind()) {
    case LayerKind::Conv: return dequantize_w(coo_decode(layer.conv().kernel).weights, frac_bits);
    case LayerKind::Fc: return dequantize_w(layer.fc().weights.weights(), frac_bits);
    case LayerKind::MaxPool: break;
    }
    throw ConfigError("layer '" + layer.name + "' has no weights");
}

namespace {

FixedPoint16 rescale(FixedPoint16 x, int from, int to) { return quantize(to_double(x, from), to); }

LayerNeuronParams rescale(const LayerNeuronParams& p, int from, int to) {
    if (from == to) return p;
    LayerNeuronParams out = p;
    out.defaults = NeuronParams{rescale(p.defaults.alpha, from, to), rescale(p.defaults.theta, from, to),
                                rescale(p.defaults.u_th0, from, to)};
    for (auto* v : {&out.alpha, &out.theta, &out.u_th0})
        for (FixedPoint16& x : *v) x = rescale(x, from, to);
    return out;
}

} // namespace

NetworkSpec apply_density_profile(const NetworkSpec& net, std::span<const double> profile, int frac_bits,
                                  CompressionReport* report) {
    const std::vector<std::size_t> weighted = net.weighted_layers();
    if (profile.size() != weighted.size())
        throw ConfigError("density profile has " + std::to_string(profile.size()) + " entries, network has " +
                          std::to_string(weighted.size()) + " weighted layers");
    if (frac_bits < 0) frac_bits = net.frac_bits;
    check_frac_bits(frac_bits);

    NetworkSpec out = net;
    out.frac_bits = frac_bits;
    if (report) report->layers.clear();

    for (std::size_t k = 0; k < weighted.size(); ++k) {
        const std::size_t l = weighted[k];
        LayerSpec& layer = out.layers[l];
        const std::vector<double> w = layer_weights(net.layers[l], net.frac_bits);
        const std::vector<std::uint8_t> keep = prune_l1(w, profile[k]);

        LayerCompression rec;
        rec.layer = l;
        rec.name = layer.name;
        rec.weights = w.size();
        rec.target = profile[k];
        std::vector<FixedPoint16> q(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!keep[i]) continue;
            ++rec.kept;
            q[i] = quantize(w[i], frac_bits);
            // a surviving weight must stay in the kernel after the scale change
            if (q[i].raw == 0 && w[i] != 0.0) {
                q[i].raw = w[i] > 0 ? 1 : -1;
                ++rec.bumped;
            }
        }
        rec.nnz = static_cast<std::size_t>(std::count_if(q.begin(), q.end(), [](FixedPoint16 x) { return x.raw != 0; }));
        rec.achieved = static_cast<double>(rec.nnz) / static_cast<double>(rec.weights);

        if (layer.kind() == LayerKind::Conv) {
            const ConvLayer& c = layer.conv();
            layer.body = make_conv(coo_encode(c.dims, q), c.pad);
        } else {
            const MaskedFcWeights& f = layer.fc().weights;
            layer.body = FcLayer{MaskedFcWeights(f.out(), f.in(), std::move(q))};
        }
        layer.neuron = rescale(net.layers[l].neuron, net.frac_bits, frac_bits);
        layer.target_density = profile[k];
        if (report) report->layers.push_back(std::move(rec));
    }
    out.validate();
    return out;
}

NetworkSpec apply_uniform_density(const NetworkSpec& net, double density, CompressionReport* report) {
    const std::vector<double> profile(net.weighted_layers().size(), density);
    return apply_density_profile(net, profile, -1, report);
}

} // namespace saocds
