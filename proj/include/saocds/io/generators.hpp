#ifndef SAOCDS_IO_GENERATORS_HPP
#define SAOCDS_IO_GENERATORS_HPP

#include <cstddef>
#include <cstdint>

#include "saocds/spike_tensor.hpp"

namespace saocds::io {

/// I.i.d. Bernoulli(fire_rate) spikes, reproducible from the seed.
SpikeTensor gen_bernoulli_input(std::size_t channels, std::size_t width, std::size_t timesteps, double fire_rate,
                                std::uint64_t seed);

} // namespace saocds::io

#endif
