#include "saocds/metrics.hpp"

#include <algorithm>

#include "saocds/error.hpp"

namespace saocds {

std::uint64_t layer_cycles(const LayerSpec& layer, const Shape& in) {
    switch (layer.kind()) {
    case LayerKind::Conv: return layer.conv().schedule.reps();
    case LayerKind::Fc: return layer.fc().weights.in();
    case LayerKind::MaxPool: return in.width;
    }
    return 0;
}

LatencyReport latency_model(const NetworkSpec& net, std::size_t timesteps) {
    const std::vector<Shape> shapes = net.shapes();
    LatencyReport r;
    r.timesteps = timesteps;
    std::uint64_t max_fc = 0;
    std::uint64_t sum = 0;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const LayerSpec& layer = net.layers[l];
        const std::uint64_t c = layer_cycles(layer, shapes[l]);
        r.layers.push_back({l, layer.name, layer.kind(), c});
        sum += c;
        if (c > r.max_stage_cycles) {
            r.max_stage_cycles = c;
            r.bottleneck = l;
        }
        if (layer.kind() == LayerKind::Conv) r.max_conv_cycles = std::max(r.max_conv_cycles, c);
        if (layer.kind() == LayerKind::Fc) max_fc = std::max(max_fc, c);
    }
    r.fc_bound = max_fc > r.max_conv_cycles;
    r.fill_cycles = sum - r.max_stage_cycles;
    r.total_cycles = timesteps == 0 ? 0 : r.fill_cycles + timesteps * r.max_stage_cycles;
    r.throughput_proxy = r.max_stage_cycles == 0 ? 0.0 : 1.0 / static_cast<double>(r.max_stage_cycles);
    return r;
}

std::vector<std::optional<double>> accumulation_ratio(std::span<const CostCounters> sparse,
                                                      std::span<const CostCounters> dense) {
    if (sparse.size() != dense.size()) throw DimensionError("accumulation ratio needs matched layer counters");
    std::vector<std::optional<double>> out(sparse.size());
    for (std::size_t l = 0; l < sparse.size(); ++l) {
        if (dense[l].accumulations == 0) continue;
        out[l] = static_cast<double>(sparse[l].accumulations) / static_cast<double>(dense[l].accumulations);
    }
    return out;
}

double fom(double lut_count, double dynamic_power_w, double throughput_s_per_s) {
    if (!(throughput_s_per_s > 0.0)) throw ConfigError("throughput must be positive");
    return lut_count * dynamic_power_w / throughput_s_per_s;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DimensionError("least squares needs >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw DimensionError("least squares: x values are all equal");
    const double slope = (n * sxy - sx * sy) / den;
    return LinearFit{slope, (sy - slope * sx) / n};
}

NetworkAnalysis analyze_network(const NetworkSpec& net) {
    NetworkAnalysis a;
    a.latency = latency_model(net, 1);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const LayerSpec& layer = net.layers[l];
        LayerAnalysis r;
        r.layer = l;
        r.name = layer.name;
        r.kind = layer.kind();
        r.weights = layer.weight_count();
        r.nnz = layer.nnz();
        r.density = r.weights ? static_cast<double>(r.nnz) / static_cast<double>(r.weights) : 0.0;
        r.cycles = a.latency.layers[l].cycles;
        if (layer.kind() == LayerKind::Conv) {
            const ConvLayer& c = layer.conv();
            r.widths = derive_widths(c.dims, net.d_bits);
            r.dense_bits = dense_storage_bits(c.dims, net.d_bits);
            r.coo_bits = coo_storage_bits(c.kernel, r.widths);
            r.coo_bits_per_unit_density = coo_bits_per_unit_density(c.dims, r.widths);
            r.break_even = break_even_density(r.widths.d_bits, r.widths.ri_bits, r.widths.ci_bits);
            r.reps = c.schedule.reps();
            r.empty = c.schedule.n_empty;
            r.extra = c.schedule.n_extra;
        } else if (layer.kind() == LayerKind::Fc) {
            r.widths.d_bits = net.d_bits;
            r.dense_bits = static_cast<std::uint64_t>(r.weights) * static_cast<std::uint64_t>(net.d_bits);
            r.mask_bits = layer.fc().weights.mask_storage_bits();
        }
        a.layers.push_back(std::move(r));
    }
    return a;
}

} // namespace saocds
