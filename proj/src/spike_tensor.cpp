#include "saocds/spike_tensor.hpp"

#include <algorithm>
#include <numeric>

#include "saocds/error.hpp"

namespace saocds {

void SpikeTensor::set_row(std::size_t t, std::size_t c, std::span<const std::uint8_t> r) {
    if (r.size() != w_) throw DimensionError("row width does not match tensor width");
    auto dst = bits_.begin() + static_cast<std::ptrdiff_t>(offset(t, c, 0));
    std::transform(r.begin(), r.end(), dst, [](std::uint8_t b) -> std::uint8_t { return b ? 1 : 0; });
}

std::size_t SpikeTensor::popcount() const {
    return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0});
}

} // namespace saocds
