#include "saocds/lif.hpp"

#include <string>

#include "saocds/error.hpp"

namespace saocds {

namespace {
void check_one(const NeuronParams& p, int frac_bits, const std::string& where) {
    const std::int32_t one = std::int32_t{1} << frac_bits;
    if (p.alpha.raw < 0 || p.alpha.raw > one) throw ConfigError(where + ": alpha must lie in [0, 1]");
    if (p.theta.raw < 0) throw ConfigError(where + ": theta must be non-negative");
}
} // namespace

void NeuronParams::validate(int frac_bits) const {
    check_frac_bits(frac_bits);
    check_one(*this, frac_bits, "neuron params");
}

void LayerNeuronParams::validate(std::size_t neurons, int frac_bits) const {
    defaults.validate(frac_bits);
    auto check_size = [&](const std::vector<FixedPoint16>& v, const char* name) {
        if (!v.empty() && v.size() != neurons)
            throw ConfigError(std::string("per-neuron ") + name + " has " + std::to_string(v.size()) +
                              " values, layer has " + std::to_string(neurons) + " neurons");
    };
    check_size(alpha, "alpha");
    check_size(theta, "theta");
    check_size(u_th0, "u_th0");
    if (has_overrides()) {
        for (std::size_t n = 0; n < neurons; ++n) check_one(at(n), frac_bits, "neuron " + std::to_string(n));
    }
}

} // namespace saocds
