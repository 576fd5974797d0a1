#include "doctest.h"

#include <boost/rational.hpp>

#include "saocds/error.hpp"
#include "saocds/lif.hpp"
#include "saocds/rng.hpp"

using namespace saocds;
using Rational = boost::rational<std::int64_t>;

namespace {

constexpr int kF = 8;

NeuronParams params(double alpha, double theta, double u_th0) {
    return NeuronParams{quantize(alpha, kF), quantize(theta, kF), quantize(u_th0, kF)};
}

Rational exact(std::int64_t raw) { return Rational(raw, 1 << kF); }

} // namespace

TEST_CASE("begin-timestep examples") {
    CHECK(lif_begin_timestep(NeuronState{}, params(0.9, 0.3, 0.5), kF) == NeuronState{});
    CHECK(lif_begin_timestep(NeuronState{Accumulator{256}, false}, params(0.5, 0.25, 1.0), kF).v.raw == 128);
    CHECK(lif_begin_timestep(NeuronState{Accumulator{256}, true}, params(0.5, 0.25, 1.0), kF).v.raw == 64);
}

TEST_CASE("firing threshold is strict") {
    const NeuronParams p = params(1.0, 1.0, 1.0);
    CHECK_FALSE(lif_fire(NeuronState{Accumulator{256}, false}, p).spike);
    CHECK(lif_fire(NeuronState{Accumulator{257}, false}, p).spike);
    const FireResult r = lif_fire(NeuronState{Accumulator{300}, false}, p);
    CHECK(r.state.v.raw == 300);  // reset is deferred to the next timestep
    CHECK(r.state.s_prev);
}

TEST_CASE("zero input decays monotonically") {
    Rng rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        const NeuronParams p{FixedPoint16{static_cast<std::int16_t>(rng.below(256))}, FixedPoint16{50}, FixedPoint16{1000}};
        NeuronState s{Accumulator{static_cast<std::int32_t>(rng.below(2000000)) - 1000000}, false};
        for (int t = 0; t < 40; ++t) {
            const NeuronState n = lif_begin_timestep(s, p, kF);
            REQUIRE(std::abs(n.v.raw) <= std::abs(s.v.raw));
            s = n;
        }
    }
}

TEST_CASE("fixed-point trace equals the rational equation when nothing rounds") {
    Rng rng(9);
    std::size_t compared = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        static constexpr double alphas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
        const NeuronParams p{quantize(alphas[rng.below(5)], kF), FixedPoint16{static_cast<std::int16_t>(256 * rng.below(3))},
                             FixedPoint16{static_cast<std::int16_t>(256 * rng.below(4))}};
        NeuronState s;
        Rational v(0);
        bool s_prev = false;
        ArithEvents ev;
        bool clean = true;
        for (int t = 0; t < 64 && clean; ++t) {
            const std::int64_t in = 256 * (static_cast<std::int64_t>(rng.below(5)) - 2);
            s = lif_begin_timestep(s, p, kF, &ev);
            s.v = sat_add(s.v, static_cast<std::int32_t>(in), &ev);
            const FireResult f = lif_fire(s, p);
            s = f.state;

            v = exact(p.alpha.raw) * v - (s_prev ? exact(p.theta.raw) : Rational(0)) + exact(in);
            s_prev = v > exact(p.u_th0.raw);

            if (ev.roundings || ev.saturations) {
                clean = false;
                break;
            }
            REQUIRE(exact(s.v.raw) == v);
            REQUIRE(f.spike == s_prev);
            ++compared;
        }
    }
    CHECK(compared > 20000);
}

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(params(1.0, 0.0, -1.0).validate(kF));
    CHECK_THROWS_AS((NeuronParams{FixedPoint16{257}, FixedPoint16{0}, FixedPoint16{0}}.validate(kF)), ConfigError);
    CHECK_THROWS_AS((NeuronParams{FixedPoint16{-1}, FixedPoint16{0}, FixedPoint16{0}}.validate(kF)), ConfigError);
    CHECK_THROWS_AS((NeuronParams{FixedPoint16{10}, FixedPoint16{-1}, FixedPoint16{0}}.validate(kF)), ConfigError);
    LayerNeuronParams lp;
    lp.defaults = params(0.5, 0.5, 0.5);
    lp.alpha = std::vector<FixedPoint16>(3, FixedPoint16{128});
    CHECK_THROWS(lp.validate(4, kF));
    CHECK_NOTHROW(lp.validate(3, kF));
    CHECK(lp.at(1).alpha.raw == 128);
}
