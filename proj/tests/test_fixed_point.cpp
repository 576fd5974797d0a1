#include "doctest.h"

#include "oracles.hpp"
#include "saocds/compression.hpp"
#include "saocds/error.hpp"
#include "saocds/fixed_point.hpp"
#include "saocds/rng.hpp"

using namespace saocds;

TEST_CASE("quantize scales, rounds and clips") {
    CHECK(quantize(0.0, 8).raw == 0);
    CHECK(quantize(-0.0, 8).raw == 0);
    CHECK(quantize(1.0, 8).raw == 256);
    CHECK(quantize(200.0, 8).raw == 32767);
    CHECK(quantize(-200.0, 8).raw == -32768);
    CHECK(quantize(-1.0, 0).raw == -1);
    CHECK(quantize(0.25, 15).raw == 8192);
}

TEST_CASE("quantize breaks ties to even") {
    // 1.5 and 2.5 ulp
    CHECK(quantize(1.5 / 256, 8).raw == 2);
    CHECK(quantize(2.5 / 256, 8).raw == 2);
    CHECK(quantize(-1.5 / 256, 8).raw == -2);
    CHECK(quantize(-2.5 / 256, 8).raw == -2);
    CHECK(quantize(2.5000001 / 256, 8).raw == 3);
}

TEST_CASE("quantize rejects NaN and bad scales") {
    CHECK_THROWS_AS(quantize(std::nan(""), 8), ConfigError);
    CHECK_THROWS_AS(quantize(1.0, 16), ConfigError);
    CHECK_THROWS_AS(quantize(1.0, -1), ConfigError);
    CHECK(quantize(INFINITY, 8).raw == 32767);
}

TEST_CASE("quantization of a quantized value is the identity") {
    for (int f : {0, 4, 8, 12, 15})
        for (int raw = -32768; raw <= 32767; raw += 7) {
            const FixedPoint16 x{static_cast<std::int16_t>(raw)};
            CHECK(quantize(to_double(x, f), f) == x);
        }
}

TEST_CASE("round_shift_even agrees with the floor-division oracle") {
    Rng rng(11);
    for (int i = 0; i < 20000; ++i) {
        const auto v = static_cast<std::int64_t>(rng.next() % (1ull << 40)) - (std::int64_t{1} << 39);
        const int shift = static_cast<int>(rng.below(16));
        CHECK(round_shift_even(v, shift) == oracle::round_div_pow2(v, shift));
    }
    CHECK(round_shift_even(3, 1) == 2);
    CHECK(round_shift_even(5, 1) == 2);
    CHECK(round_shift_even(-3, 1) == -2);
    CHECK(round_shift_even(-5, 1) == -2);
}

TEST_CASE("rounding events are counted only for inexact shifts") {
    ArithEvents ev;
    round_shift_even(256, 8, &ev);
    CHECK(ev.roundings == 0);
    round_shift_even(257, 8, &ev);
    CHECK(ev.roundings == 1);
}

TEST_CASE("saturating arithmetic clamps at the 32-bit boundary") {
    ArithEvents ev;
    CHECK(sat_add(Accumulator{INT32_MAX - 1}, 5, &ev).raw == INT32_MAX);
    CHECK(sat_sub(Accumulator{INT32_MIN + 1}, 5, &ev).raw == INT32_MIN);
    CHECK(ev.saturations == 2);
    CHECK(sat_add(Accumulator{10}, -3).raw == 7);
    CHECK(mul_round(FixedPoint16{128}, Accumulator{3}, 8).raw == 2);  // 1.5 -> 2
    CHECK(mul_round(FixedPoint16{128}, Accumulator{5}, 8).raw == 2);  // 2.5 -> 2
}

TEST_CASE("quantize_w is idempotent on 10^4 random arrays") {
    Rng rng(5);
    for (int trial = 0; trial < 10000; ++trial) {
        const int f = static_cast<int>(rng.below(16));
        std::vector<double> w(8);
        for (double& x : w) x = rng.normal() * 4.0;
        const auto q = quantize_w(w, f);
        const auto again = quantize_w(dequantize_w(q, f), f);
        REQUIRE(q == again);
    }
}
