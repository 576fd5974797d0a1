#ifndef SAOCDS_COMPRESSION_HPP
#define SAOCDS_COMPRESSION_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "saocds/fixed_point.hpp"
#include "saocds/network.hpp"

namespace saocds {

/// Magnitude pruning. Keeps exactly round(density * N) weights with the
/// largest |w|; on equal magnitude the lower index wins.
std::vector<std::uint8_t> prune_l1(std::span<const double> weights, double target_density);

/// round-half-even(w * 2^frac_bits), clamped to 16 bits.
std::vector<FixedPoint16> quantize_w(std::span<const double> weights, int frac_bits);
std::vector<double> dequantize_w(std::span<const FixedPoint16> weights, int frac_bits);

/// frac_bits in [0, 15] minimising the round-trip squared error; ties go to
/// the larger value.
int choose_frac_bits(std::span<const double> weights);

/// "25-20-15-20-25" style profile. All values <= 1 are read as fractions,
/// otherwise as percentages.
std::vector<double> parse_density_profile(std::string_view text);

struct LayerCompression {
    std::size_t layer = 0;
    std::string name;
    std::size_t weights = 0;
    std::size_t kept = 0;          // round(target * weights)
    std::size_t nnz = 0;           // nonzeros after quantization
    std::size_t bumped = 0;        // kept weights that rounded to zero, moved to +-1 ulp
    double target = 0.0;
    double achieved = 0.0;         // nnz / weights
};

struct CompressionReport {
    std::vector<LayerCompression> layers;
};

/// Flat weights of a weighted layer as reals: [oc][ic][ci] for conv,
/// [out][in] for FC.
std::vector<double> layer_weights(const LayerSpec& layer, int frac_bits);

/// Prunes every weighted layer to its profile density, requantizes at
/// frac_bits (the network's own when negative), re-encodes and rebuilds
/// the schedules. Neuron parameters are carried over to the new scale.
NetworkSpec apply_density_profile(const NetworkSpec& net, std::span<const double> profile, int frac_bits = -1,
                                  CompressionReport* report = nullptr);

/// Same density for every weighted layer.
NetworkSpec apply_uniform_density(const NetworkSpec& net, double density, CompressionReport* report = nullptr);

} // namespace saocds

#endif
