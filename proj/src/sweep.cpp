#include "saocds/sweep.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "saocds/compression.hpp"
#include "saocds/error.hpp"
#include "saocds/io/generators.hpp"
#include "saocds/reference_sw.hpp"
#include "saocds/runner.hpp"

namespace saocds {

namespace {

double parse_number(std::string_view s, std::string_view whole) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || end != s.data() + s.size())
        throw ConfigError("bad density list '" + std::string(whole) + "'");
    return v;
}

void check_density(double d, std::string_view whole) {
    if (!(d > 0.0 && d <= 1.0))
        throw ConfigError("density list '" + std::string(whole) + "' has a value outside (0, 1]");
}

// Runs body(i) for i in [0, n), in parallel if asked. The first exception
// is rethrown on the calling thread.
template <class F>
void for_each_index(std::size_t n, bool parallel, F&& body) {
    std::exception_ptr err;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(saocds_for_each_error)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

} // namespace

std::vector<double> parse_density_list(std::string_view text) {
    std::vector<double> out;
    const std::size_t dots = text.find("..");
    if (dots != std::string_view::npos) {
        std::string_view rest = text.substr(dots + 2);
        double step = 0.05;
        if (const std::size_t colon = rest.find(':'); colon != std::string_view::npos) {
            step = parse_number(rest.substr(colon + 1), text);
            rest = rest.substr(0, colon);
        }
        const double lo = parse_number(text.substr(0, dots), text);
        const double hi = parse_number(rest, text);
        if (!(step > 0.0) || hi < lo) throw ConfigError("bad density range '" + std::string(text) + "'");
        const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < n; ++i) {
            // snap to 1e-9 so 0.05 + 2 * 0.05 prints as 0.15
            const double v = std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9;
            out.push_back(v);
        }
    } else {
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = text.find(',', pos);
            out.push_back(parse_number(text.substr(pos, comma == std::string_view::npos ? comma : comma - pos), text));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
    for (double d : out) check_density(d, text);
    return out;
}

std::vector<SweepRow> density_sweep(const NetworkSpec& dense, const SweepConfig& cfg) {
    if (cfg.densities.empty()) throw ConfigError("density sweep needs at least one density");
    const SpikeTensor input =
        io::gen_bernoulli_input(dense.input.channels, dense.input.width, cfg.timesteps, cfg.rate, cfg.seed);

    std::vector<std::vector<SweepRow>> per_density(cfg.densities.size());
    for_each_index(cfg.densities.size(), cfg.parallel, [&](std::size_t k) {
        const double d = cfg.densities[k];
        const NetworkSpec net = apply_uniform_density(dense, d);
        RunOptions opt;
        opt.mode = ExecutionMode::Sequential;
        const RunResult streaming = saocds_network_run(net, input, opt);
        const RunResult sliding = sw_network_run(net, input);
        const auto ratios = accumulation_ratio(streaming.layer_counters, sliding.layer_counters);
        const LatencyReport& lat = streaming.latency;

        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            const LayerSpec& layer = net.layers[l];
            SweepRow r;
            r.density = d;
            r.layer = l;
            r.name = layer.name;
            r.kind = layer.kind();
            r.weights = layer.weight_count();
            r.nnz = layer.nnz();
            r.accum_streaming = streaming.layer_counters[l].accumulations;
            r.accum_sliding = sliding.layer_counters[l].accumulations;
            r.accum_ratio = ratios[l];
            r.cycles = lat.layers[l].cycles;
            if (layer.kind() == LayerKind::Conv) {
                r.empty = layer.conv().schedule.n_empty;
                r.extra = layer.conv().schedule.n_extra;
            }
            r.bottleneck = lat.bottleneck == l;
            r.fc_bound = lat.fc_bound;
            r.total_cycles = lat.total_cycles;
            per_density[k].push_back(std::move(r));
        }
    });

    std::vector<SweepRow> rows;
    for (auto& v : per_density) rows.insert(rows.end(), v.begin(), v.end());
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os.precision(10);
    os << "density,layer,name,kind,weights,nnz,accum_streaming,accum_sliding,accum_ratio,cycles,empty,extra,"
          "bottleneck,fc_bound,total_cycles\n";
    for (const SweepRow& r : rows) {
        os << r.density << ',' << r.layer << ',' << r.name << ',' << to_string(r.kind) << ',' << r.weights << ','
           << r.nnz << ',' << r.accum_streaming << ',' << r.accum_sliding << ',';
        if (r.accum_ratio) os << *r.accum_ratio;
        os << ',' << r.cycles << ',' << r.empty << ',' << r.extra << ',' << (r.bottleneck ? 1 : 0) << ','
           << (r.fc_bound ? 1 : 0) << ',' << r.total_cycles << '\n';
    }
    return os.str();
}

std::vector<OverheadTrial> overhead_trials(const std::function<NetworkSpec(std::uint64_t)>& make, double density,
                                           std::size_t trials, std::uint64_t base_seed, bool parallel) {
    std::vector<OverheadTrial> out(trials);
    for_each_index(trials, parallel, [&](std::size_t i) {
        OverheadTrial& tr = out[i];
        tr.seed = base_seed + i;
        const NetworkSpec dense = make(tr.seed);
        const NetworkSpec net = apply_uniform_density(dense, density);
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            if (net.layers[l].kind() != LayerKind::Conv) continue;
            const IterationSchedule& s = net.layers[l].conv().schedule;
            tr.conv_layers.push_back(l);
            tr.empty_extra.push_back(s.n_empty + s.n_extra);
            tr.conv_iterations += s.reps();
            tr.dense_conv_iterations += dense.layers[l].conv().schedule.reps();
        }
    });
    return out;
}

int parallel_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace saocds
