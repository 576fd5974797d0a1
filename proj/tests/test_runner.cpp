#include "doctest.h"

#include <thread>

#include "oracles.hpp"
#include "saocds/error.hpp"
#include "saocds/io/generators.hpp"
#include "saocds/pipeline.hpp"
#include "saocds/reference_sw.hpp"
#include "saocds/runner.hpp"

using namespace saocds;

TEST_CASE("streaming network output equals both the oracle and the sliding-window engine") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const NetworkSpec net = oracle::random_network(rng, rng.uniform(0.05, 1.0));
        const SpikeTensor in = oracle::random_input(rng, net.input, 1 + rng.below(6), rng.uniform(0.1, 0.9));
        const RunResult st = saocds_network_run(net, in);
        REQUIRE(st.output == oracle::network_run(net, in));
        REQUIRE(st.output == sw_network_run(net, in).output);
    }
}

TEST_CASE("pipelined and sequential modes agree on outputs and counters") {
    Rng rng(32);
    for (int trial = 0; trial < 60; ++trial) {
        const NetworkSpec net = oracle::random_network(rng, rng.uniform(0.05, 1.0));
        const SpikeTensor in = oracle::random_input(rng, net.input, 1 + rng.below(6), 0.5);
        RunOptions seq{ExecutionMode::Sequential, 2, true};
        const RunResult a = saocds_network_run(net, in, seq);
        for (std::size_t depth : {1u, 2u, 5u}) {
            RunOptions pipe{ExecutionMode::Pipelined, depth, true};
            const RunResult b = saocds_network_run(net, in, pipe);
            REQUIRE(a.output == b.output);
            REQUIRE(a.layer_counters == b.layer_counters);
            REQUIRE(a.layer_outputs == b.layer_outputs);
            REQUIRE_FALSE(first_spike_mismatch(a, b).has_value());
        }
    }
}

TEST_CASE("diagonal 1x1 network copies its input for one timestep") {
    const std::size_t C = 4;
    const ConvDims d{1, C, C, 9};
    DenseKernel k(d);
    for (std::size_t c = 0; c < C; ++c) k.at(c, c, 0) = quantize(4.0, 8);
    NetworkSpec net;
    net.input = Shape{C, 9};
    net.layers.push_back(conv_layer("id", coo_encode(k), 0, uniform_neuron(0.3, 4.0, 4.0 - 1.0 / 256, 8)));
    Rng rng(1);
    const SpikeTensor in = oracle::random_input(rng, net.input, 1, 0.5);
    CHECK(saocds_network_run(net, in).output == in);
}

TEST_CASE("dense default network has no empty or extra iterations") {
    const NetworkSpec net = default_network();
    const SpikeTensor in = io::gen_bernoulli_input(2, 128, 2, 0.5, 3);
    const RunResult r = saocds_network_run(net, in);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        CHECK(r.layer_counters[l].iters_empty == 0);
        CHECK(r.layer_counters[l].iters_extra == 0);
    }
    CHECK(r.output == sw_network_run(net, in).output);
    CHECK(r.layer_outputs.empty());
}

TEST_CASE("zero timesteps give an empty output and zero counters") {
    const NetworkSpec net = default_network();
    const RunResult r = saocds_network_run(net, SpikeTensor(0, 2, 128));
    CHECK(r.output.timesteps() == 0);
    CHECK(r.total() == CostCounters{});
    CHECK(r.latency.total_cycles == 0);
}

TEST_CASE("readout potentials agree between engines") {
    Rng rng(4);
    NetworkSpec net = oracle::random_network(rng, 0.7);
    net.readout_potentials = true;
    const SpikeTensor in = oracle::random_input(rng, net.input, 3, 0.5);
    const RunResult a = saocds_network_run(net, in);
    const RunResult b = sw_network_run(net, in);
    CHECK(a.final_potentials.size() == net.layers.back().neurons());
    CHECK(a.final_potentials == b.final_potentials);
}

TEST_CASE("input validation") {
    const NetworkSpec net = small_conv_example();
    CHECK_THROWS_AS(saocds_network_run(net, SpikeTensor(1, 2, 5)), DimensionError);
    CHECK_THROWS_AS(saocds_network_run(net, SpikeTensor(1, 2, 6), RunOptions{ExecutionMode::Pipelined, 0, false}),
                    ConfigError);
    NetworkSpec broken = net;
    std::get<ConvLayer>(broken.layers[0].body).schedule.tags.pop_back();
    CHECK_THROWS_AS(saocds_network_run(broken, SpikeTensor(1, 2, 6)), ScheduleError);
}

TEST_CASE("bounded queue keeps order and reports closure") {
    PipelineMonitor mon(2);
    BoundedQueue<int> q(2, mon, 0, 1, "a->b");
    std::thread producer([&] {
        for (int i = 0; i < 100; ++i) q.push(i);
        q.close();
        mon.finished(0);
    });
    for (int i = 0; i < 100; ++i) CHECK(q.pop() == i);
    CHECK_FALSE(q.pop().has_value());
    producer.join();
}

TEST_CASE("two stages waiting on each other are reported as a deadlock") {
    PipelineMonitor mon(2);
    BoundedQueue<int> ab(1, mon, 0, 1, "a->b");
    BoundedQueue<int> ba(1, mon, 1, 0, "b->a");
    std::exception_ptr err_a, err_b;
    std::thread a([&] {
        try {
            ba.pop();
        } catch (...) {
            err_a = std::current_exception();
        }
        ab.notify();
    });
    std::thread b([&] {
        try {
            ab.pop();
        } catch (...) {
            err_b = std::current_exception();
        }
        ba.notify();
    });
    a.join();
    b.join();
    CHECK(mon.deadlocked());
    REQUIRE((err_a || err_b));
    try {
        std::rethrow_exception(err_a ? err_a : err_b);
    } catch (const DeadlockError& e) {
        CHECK(std::string(e.what()).find("deadlock") != std::string::npos);
        CHECK(e.producer_layer <= 1);
        CHECK(e.consumer_layer <= 1);
    }
}
