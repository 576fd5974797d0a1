#include "saocds/io/generators.hpp"

#include "saocds/error.hpp"
#include "saocds/rng.hpp"

namespace saocds::io {

SpikeTensor gen_bernoulli_input(std::size_t channels, std::size_t width, std::size_t timesteps, double fire_rate,
                                std::uint64_t seed) {
    if (!(fire_rate >= 0.0 && fire_rate <= 1.0)) throw ConfigError("fire rate must be in [0, 1]");
    SpikeTensor s(timesteps, channels, width);
    Rng rng(seed);
    for (std::size_t t = 0; t < timesteps; ++t)
        for (std::size_t c = 0; c < channels; ++c)
            for (std::size_t x = 0; x < width; ++x) s.set(t, c, x, rng.bernoulli(fire_rate));
    return s;
}

} // namespace saocds::io
