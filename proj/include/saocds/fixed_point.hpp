#ifndef SAOCDS_FIXED_POINT_HPP
#define SAOCDS_FIXED_POINT_HPP

#include <cstdint>
#include <limits>

namespace saocds {

inline constexpr int kDefaultFracBits = 8;
inline constexpr int kWeightBits = 16;

/// Signed 16-bit two's-complement fixed point. The fractional-bit count is
/// configuration-global (carried by the network), not stored per value.
struct FixedPoint16 {
    std::int16_t raw = 0;

    friend constexpr bool operator==(FixedPoint16, FixedPoint16) = default;
};

/// 32-bit membrane-potential register at the same scale as the weights.
struct Accumulator {
    std::int32_t raw = 0;

    friend constexpr bool operator==(Accumulator, Accumulator) = default;
};

/// Counts arithmetic events that make a fixed-point result differ from the
/// exact rational one. Optional sink for instrumented runs.
struct ArithEvents {
    std::uint64_t roundings = 0;
    std::uint64_t saturations = 0;
};

constexpr std::int32_t saturate_i32(std::int64_t v, ArithEvents* ev = nullptr) {
    constexpr std::int64_t lo = std::numeric_limits<std::int32_t>::min();
    constexpr std::int64_t hi = std::numeric_limits<std::int32_t>::max();
    if (v < lo || v > hi) {
        if (ev) ++ev->saturations;
        return static_cast<std::int32_t>(v < lo ? lo : hi);
    }
    return static_cast<std::int32_t>(v);
}

/// Divide by 2^shift, rounding to nearest with ties to even.
constexpr std::int64_t round_shift_even(std::int64_t v, int shift, ArithEvents* ev = nullptr) {
    if (shift <= 0) return v;
    const std::int64_t mask = (std::int64_t{1} << shift) - 1;
    const std::int64_t half = std::int64_t{1} << (shift - 1);
    std::int64_t q = v >> shift; // floor
    const std::int64_t rem = v & mask;
    if (rem != 0) {
        if (ev) ++ev->roundings;
        if (rem > half || (rem == half && (q & 1) != 0)) ++q;
    }
    return q;
}

constexpr Accumulator widen(FixedPoint16 x) { return Accumulator{x.raw}; }

constexpr Accumulator sat_add(Accumulator a, std::int32_t delta, ArithEvents* ev = nullptr) {
    return Accumulator{saturate_i32(std::int64_t{a.raw} + delta, ev)};
}

constexpr Accumulator sat_sub(Accumulator a, std::int32_t delta, ArithEvents* ev = nullptr) {
    return Accumulator{saturate_i32(std::int64_t{a.raw} - delta, ev)};
}

/// coeff * v with the product rescaled back to frac_bits.
constexpr Accumulator mul_round(FixedPoint16 coeff, Accumulator v, int frac_bits,
                                ArithEvents* ev = nullptr) {
    const std::int64_t prod = std::int64_t{coeff.raw} * std::int64_t{v.raw};
    return Accumulator{saturate_i32(round_shift_even(prod, frac_bits, ev), ev)};
}

/// Scale, clip to the 16-bit range, round half to even. Zero stays zero.
FixedPoint16 quantize(double value, int frac_bits);

double to_double(FixedPoint16 x, int frac_bits);
double to_double(Accumulator x, int frac_bits);

void check_frac_bits(int frac_bits);

} // namespace saocds

#endif
