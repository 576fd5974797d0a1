#ifndef SAOCDS_NETWORK_HPP
#define SAOCDS_NETWORK_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "saocds/core_model.hpp"
#include "saocds/fc_mvtu.hpp"
#include "saocds/lif.hpp"

namespace saocds {

enum class LayerKind { Conv, MaxPool, Fc };

const char* to_string(LayerKind k);

struct Shape {
    std::size_t channels = 0;
    std::size_t width = 0;

    friend constexpr bool operator==(const Shape&, const Shape&) = default;
};

struct ConvLayer {
    ConvDims dims;
    std::size_t pad = 0;  // zeros added on each side of every input row
    SparseKernelCOO kernel;
    IterationSchedule schedule;

    std::size_t raw_in_width() const { return dims.in_w() - 2 * pad; }

    friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

struct PoolLayer {
    std::size_t window = 2;

    friend bool operator==(const PoolLayer&, const PoolLayer&) = default;
};

struct FcLayer {
    MaskedFcWeights weights;

    friend bool operator==(const FcLayer&, const FcLayer&) = default;
};

struct LayerSpec {
    std::string name;
    std::variant<ConvLayer, PoolLayer, FcLayer> body;
    LayerNeuronParams neuron;
    std::optional<double> target_density;  // set by compression, informational

    LayerKind kind() const;
    bool weighted() const { return kind() != LayerKind::MaxPool; }

    const ConvLayer& conv() const { return std::get<ConvLayer>(body); }
    const PoolLayer& pool() const { return std::get<PoolLayer>(body); }
    const FcLayer& fc() const { return std::get<FcLayer>(body); }

    /// Output shape for a given input shape; throws DimensionError on mismatch.
    Shape output_shape(const Shape& in) const;
    std::size_t neurons() const;
    std::size_t weight_count() const;
    std::size_t nnz() const;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct NetworkSpec {
    int frac_bits = kDefaultFracBits;
    int d_bits = kWeightBits;
    Shape input;
    std::vector<LayerSpec> layers;
    bool readout_potentials = false;

    /// Input shape of every layer followed by the network output shape.
    std::vector<Shape> shapes() const;
    Shape output_shape() const { return shapes().back(); }
    std::vector<std::size_t> weighted_layers() const;

    /// Dimension chain, schedules and neuron parameters.
    void validate() const;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

ConvLayer make_conv(SparseKernelCOO kernel, std::size_t pad);
LayerSpec conv_layer(std::string name, SparseKernelCOO kernel, std::size_t pad, LayerNeuronParams neuron);
LayerSpec pool_layer(std::string name, std::size_t window);
LayerSpec fc_layer(std::string name, MaskedFcWeights weights, LayerNeuronParams neuron);

LayerNeuronParams uniform_neuron(double alpha, double theta, double u_th0, int frac_bits);

/// Dense random weights for every weighted layer of a topology, drawn from
/// N(0, gain^2 / fan_in) with a seeded generator.
struct RandomWeightConfig {
    std::uint64_t seed = 1;
    double gain = 2.0;
};

/// Dense weights from N(0, gain^2 / fan_in), quantized; values that round to
/// zero are moved to +-1 ulp so the result has no zeros.
std::vector<FixedPoint16> random_weights(std::uint64_t seed, std::size_t count, std::size_t fan_in, double gain,
                                         int frac_bits);

/// Every weighted layer draws from its own stream so layers can be
/// regenerated independently (model files store the per-layer seed).
constexpr std::uint64_t layer_seed(std::uint64_t seed, std::size_t layer_index) {
    return seed * 0x9E3779B97F4A7C15ull + layer_index;
}

/// Five-layer modulation classifier: three conv layers (kw 11/11/5, channels
/// 2->16->32->64, same padding) each followed by 2x max pooling, then FC
/// 1024->128 and FC 128->11, on (2, 128) frames.
NetworkSpec default_network(const RandomWeightConfig& cfg = {}, int frac_bits = kDefaultFracBits);

/// One dense random conv layer with same padding, e.g. the second layer of
/// the default network as a standalone benchmark.
NetworkSpec single_conv_network(const ConvDims& dims, const RandomWeightConfig& cfg = {},
                                int frac_bits = kDefaultFracBits);

/// Single conv layer: padded input width 6, 2 input channels, kernel width 3,
/// 4 output channels, 3 nonzero weights per output channel.
NetworkSpec small_conv_example();

} // namespace saocds

#endif
