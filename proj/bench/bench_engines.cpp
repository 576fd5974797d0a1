#include <benchmark/benchmark.h>

#include "saocds/compression.hpp"
#include "saocds/io/generators.hpp"
#include "saocds/reference_sw.hpp"
#include "saocds/runner.hpp"
#include "saocds/sweep.hpp"

using namespace saocds;

namespace {

const NetworkSpec& pruned_default(double density) {
    static const NetworkSpec dense = default_network();
    static std::vector<std::pair<double, NetworkSpec>> cache;
    for (const auto& [d, n] : cache)
        if (d == density) return n;
    cache.emplace_back(density, apply_uniform_density(dense, density));
    return cache.back().second;
}

void BM_streaming(benchmark::State& st) {
    const NetworkSpec& net = pruned_default(static_cast<double>(st.range(0)) / 100.0);
    const SpikeTensor in = io::gen_bernoulli_input(2, 128, 8, 0.5, 1);
    RunOptions opt;
    opt.mode = st.range(1) ? ExecutionMode::Pipelined : ExecutionMode::Sequential;
    for (auto _ : st) benchmark::DoNotOptimize(saocds_network_run(net, in, opt));
}
BENCHMARK(BM_streaming)->ArgsProduct({{15, 50, 100}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_sliding(benchmark::State& st) {
    const NetworkSpec& net = pruned_default(static_cast<double>(st.range(0)) / 100.0);
    const SpikeTensor in = io::gen_bernoulli_input(2, 128, 8, 0.5, 1);
    for (auto _ : st) benchmark::DoNotOptimize(sw_network_run(net, in));
}
BENCHMARK(BM_sliding)->Arg(15)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_sweep(benchmark::State& st) {
    const NetworkSpec net = single_conv_network(ConvDims{11, 16, 32, 64});
    SweepConfig cfg;
    cfg.densities = parse_density_list("0.1..0.9:0.1");
    cfg.timesteps = 4;
    cfg.parallel = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(density_sweep(net, cfg));
}
BENCHMARK(BM_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
