#include "saocds/fixed_point.hpp"

#include <cmath>
#include <string>

#include "saocds/error.hpp"

namespace saocds {

void check_frac_bits(int frac_bits) {
    if (frac_bits < 0 || frac_bits > 15) {
        throw ConfigError("frac_bits must be in [0, 15], got " + std::to_string(frac_bits));
    }
}

FixedPoint16 quantize(double value, int frac_bits) {
    check_frac_bits(frac_bits);
    if (std::isnan(value)) throw ConfigError("cannot quantize NaN");
    // Power-of-two scaling is exact in binary floating point.
    const double scaled = std::ldexp(value, frac_bits);
    constexpr double lo = std::numeric_limits<std::int16_t>::min();
    constexpr double hi = std::numeric_limits<std::int16_t>::max();
    if (scaled <= lo) return FixedPoint16{static_cast<std::int16_t>(lo)};
    if (scaled >= hi) return FixedPoint16{static_cast<std::int16_t>(hi)};
    // nearbyint honours the default ties-to-even rounding mode
    return FixedPoint16{static_cast<std::int16_t>(std::nearbyint(scaled))};
}

double to_double(FixedPoint16 x, int frac_bits) { return std::ldexp(static_cast<double>(x.raw), -frac_bits); }

double to_double(Accumulator x, int frac_bits) { return std::ldexp(static_cast<double>(x.raw), -frac_bits); }

} // namespace saocds
