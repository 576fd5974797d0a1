#include "doctest.h"

#include "oracles.hpp"
#include "saocds/error.hpp"
#include "saocds/fc_mvtu.hpp"
#include "saocds/reference_sw.hpp"

using namespace saocds;

TEST_CASE("fetch mask selects only active inputs with nonzero weights") {
    const std::vector<std::uint8_t> ifm{1, 0, 1, 1}, wm{0, 1, 1, 0};
    CHECK(fetch_mask(ifm, wm) == std::vector<std::uint8_t>{0, 0, 1, 0});

    const MaskedFcWeights w(1, 4, {FixedPoint16{0}, FixedPoint16{3}, FixedPoint16{5}, FixedPoint16{0}});
    CHECK(std::vector<std::uint8_t>(w.mask().begin(), w.mask().end()) == wm);
    LayerNeuronParams p;
    p.defaults = NeuronParams{FixedPoint16{256}, FixedPoint16{0}, FixedPoint16{100}};

    PotentialBank bank(1, 1), bank_sw(1, 1);
    CostCounters c, c_sw;
    fc_timestep(ifm, w, bank, p, 8, 16, c);
    sw_fc_timestep(ifm, w, bank_sw, p, 8, 16, c_sw);
    CHECK(c.weight_fetches == 1);
    CHECK(c.accumulations == 1);
    CHECK(c_sw.weight_fetches == 3);  // baseline fetches a weight per active input
    CHECK(bank[0].v.raw == 5);
    CHECK(bank == bank_sw);
}

TEST_CASE("zero input fetches nothing") {
    Rng rng(3);
    std::vector<FixedPoint16> w(5 * 7);
    for (auto& x : w) x = oracle::random_weight(rng, 1.0, 8);
    const MaskedFcWeights fc(5, 7, w);
    PotentialBank bank(1, 5);
    bank[2].v.raw = 1000;
    CostCounters c;
    LayerNeuronParams p;
    p.defaults = NeuronParams{FixedPoint16{128}, FixedPoint16{0}, FixedPoint16{400}};
    const SpikeRow out = fc_timestep(std::vector<std::uint8_t>(7, 0), fc, bank, p, 8, 16, c);
    CHECK(c.weight_fetches == 0);
    CHECK(c.accumulations == 0);
    CHECK(out[2] == 1);  // 1000 * 0.5 > 400
    CHECK(out[0] == 0);
}

TEST_CASE("FC engine matches a dense matrix-vector oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t in = 1 + rng.below(64), out = 1 + rng.below(16);
        const double density = rng.uniform(0.05, 1.0);
        std::vector<FixedPoint16> w(in * out);
        for (auto& x : w)
            if (rng.bernoulli(density)) x = oracle::random_weight(rng, 1.5 / std::sqrt(double(in)), 8);
        NetworkSpec net;
        net.input = Shape{1, in};
        net.layers.push_back(fc_layer("fc", MaskedFcWeights(out, in, w), oracle::random_neuron(rng, 8, out, true)));
        net.validate();
        const std::size_t T = 1 + rng.below(6);
        const SpikeTensor x = oracle::random_input(rng, net.input, T, rng.uniform(0.1, 0.9));
        const SpikeTensor expect = oracle::network_run(net, x);

        const MaskedFcWeights& fw = net.layers[0].fc().weights;
        PotentialBank bank(1, out);
        CostCounters c;
        std::uint64_t fm_total = 0;
        for (std::size_t t = 0; t < T; ++t) {
            const auto row = x.row(t, 0);
            const SpikeRow o = fc_timestep(row, fw, bank, net.layers[0].neuron, 8, 16, c);
            for (std::size_t k = 0; k < out; ++k) REQUIRE(o[k] == expect.at(t, 0, k));
            for (std::size_t k = 0; k < out; ++k) {
                const auto fm = fetch_mask(row, fw.mask_row(k));
                fm_total += static_cast<std::uint64_t>(std::count(fm.begin(), fm.end(), 1));
            }
        }
        REQUIRE(c.accumulations == fm_total);
        REQUIRE(c.weight_fetches == fm_total);
        REQUIRE(c.input_fetches == in * out * T);
    }
}

TEST_CASE("max pooling is an OR over non-overlapping windows") {
    CostCounters c;
    const std::vector<std::uint8_t> in{0, 0, 1, 0, 0, 1, 1, 1, 1};
    CHECK(maxpool_row(in, 2, c) == SpikeRow{0, 1, 1, 1});
    CHECK(maxpool_row(in, 3, c) == SpikeRow{1, 1, 1});
    CHECK(c.weight_fetches == 0);
    CHECK_THROWS_AS(maxpool_row(in, 0, c), DimensionError);
    CHECK_THROWS_AS(maxpool_row(in, 10, c), DimensionError);
}

TEST_CASE("shape errors") {
    const MaskedFcWeights w(2, 3, std::vector<FixedPoint16>(6, FixedPoint16{1}));
    PotentialBank bank(1, 2);
    CostCounters c;
    LayerNeuronParams p;
    CHECK_THROWS_AS(fc_timestep(std::vector<std::uint8_t>(4), w, bank, p, 8, 16, c), DimensionError);
    PotentialBank small(1, 1);
    CHECK_THROWS_AS(fc_timestep(std::vector<std::uint8_t>(3), w, small, p, 8, 16, c), DimensionError);
    CHECK_THROWS_AS(MaskedFcWeights(2, 3, std::vector<FixedPoint16>(5)), DimensionError);
    CHECK(w.mask_storage_bits() == 6);
}
