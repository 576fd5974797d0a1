#include "saocds/io/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace saocds::io {

using nlohmann::ordered_json;

namespace {

ordered_json provenance_json(const Provenance& p) {
    ordered_json j;
    j["tool"] = "saocds";
    j["tool_version"] = kToolVersion;
    j["command"] = p.command;
    j["model_hash"] = hex64(p.model_hash);
    j["model_path"] = p.model_path;
    if (!p.input_path.empty()) j["input_path"] = p.input_path;
    j["seed"] = p.seed ? ordered_json(*p.seed) : ordered_json(nullptr);
    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : p.config) cfg[k] = v;
    j["config"] = cfg;
    return j;
}

ordered_json counters_json(const CostCounters& c) {
    return ordered_json{{"input_fetches", c.input_fetches}, {"weight_fetches", c.weight_fetches},
                        {"accumulations", c.accumulations}, {"input_bits", c.input_bits},
                        {"weight_bits", c.weight_bits},     {"total_bits", c.total_bits()},
                        {"iters_normal", c.iters_normal},   {"iters_empty", c.iters_empty},
                        {"iters_extra", c.iters_extra},     {"bank_loads", c.bank_loads},
                        {"bank_stores", c.bank_stores},     {"rows_read", c.rows_read}};
}

ordered_json latency_json(const NetworkSpec& net, const LatencyReport& l) {
    ordered_json layers = ordered_json::array();
    for (const LayerLatency& x : l.layers)
        layers.push_back({{"layer", x.layer}, {"name", x.name}, {"kind", to_string(x.kind)}, {"cycles", x.cycles}});
    ordered_json j;
    j["unit"] = "iterations";
    j["layers"] = layers;
    j["bottleneck"] = l.layers.empty() ? ordered_json(nullptr) : ordered_json(net.layers[l.bottleneck].name);
    j["max_stage_cycles"] = l.max_stage_cycles;
    j["max_conv_cycles"] = l.max_conv_cycles;
    j["fill_cycles"] = l.fill_cycles;
    j["total_cycles"] = l.total_cycles;
    j["timesteps"] = l.timesteps;
    j["fc_bound"] = l.fc_bound;
    j["throughput_proxy"] = l.throughput_proxy;
    return j;
}

ordered_json layers_json(const NetworkSpec& net, const RunResult& r) {
    ordered_json layers = ordered_json::array();
    for (std::size_t l = 0; l < net.layers.size(); ++l)
        layers.push_back({{"layer", l},
                          {"name", net.layers[l].name},
                          {"kind", to_string(net.layers[l].kind())},
                          {"counters", counters_json(r.layer_counters[l])}});
    return layers;
}

} // namespace

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string run_report_json(const NetworkSpec& net, const RunResult& r, const std::string& engine,
                            const Provenance& prov) {
    ordered_json j;
    j["schema"] = "saocds-run-report";
    j["schema_version"] = kReportSchemaVersion;
    j["provenance"] = provenance_json(prov);
    j["engine"] = engine;
    j["timesteps"] = r.output.timesteps();
    j["output"] = {{"channels", r.output.channels()}, {"width", r.output.width()}, {"spikes", r.output.popcount()}};
    if (!r.final_potentials.empty()) j["final_potentials"] = r.final_potentials;
    j["layers"] = layers_json(net, r);
    j["totals"] = counters_json(r.total());
    j["latency"] = latency_json(net, r.latency);
    return j.dump(2) + "\n";
}

std::string compare_report_json(const NetworkSpec& net, const RunResult& streaming, const RunResult& sliding,
                                const std::optional<SpikeMismatch>& mismatch, const Provenance& prov) {
    ordered_json j;
    j["schema"] = "saocds-compare-report";
    j["schema_version"] = kReportSchemaVersion;
    j["provenance"] = provenance_json(prov);
    j["equal"] = !mismatch.has_value();
    if (mismatch)
        j["first_mismatch"] = {{"t", mismatch->t},
                               {"layer", mismatch->layer},
                               {"name", net.layers[mismatch->layer].name},
                               {"oc", mismatch->channel},
                               {"oi", mismatch->pixel}};
    j["timesteps"] = streaming.output.timesteps();
    j["streaming"] = {{"layers", layers_json(net, streaming)}, {"totals", counters_json(streaming.total())}};
    j["sliding_window"] = {{"layers", layers_json(net, sliding)}, {"totals", counters_json(sliding.total())}};
    return j.dump(2) + "\n";
}

std::string analysis_report_json(const NetworkAnalysis& a, const Provenance& prov) {
    ordered_json layers = ordered_json::array();
    for (const LayerAnalysis& l : a.layers) {
        ordered_json j;
        j["layer"] = l.layer;
        j["name"] = l.name;
        j["kind"] = to_string(l.kind);
        j["weights"] = l.weights;
        j["nnz"] = l.nnz;
        j["density"] = l.density;
        if (l.kind == LayerKind::Conv) {
            j["d_bits"] = l.widths.d_bits;
            j["ri_bits"] = l.widths.ri_bits;
            j["ci_bits"] = l.widths.ci_bits;
            j["dense_bits"] = l.dense_bits;
            j["coo_bits"] = l.coo_bits;
            j["coo_bits_per_unit_density"] = l.coo_bits_per_unit_density;
            j["break_even_density"] = l.break_even;
            j["reps"] = l.reps;
            j["empty"] = l.empty;
            j["extra"] = l.extra;
        } else if (l.kind == LayerKind::Fc) {
            j["dense_bits"] = l.dense_bits;
            j["mask_bits"] = l.mask_bits;
        }
        j["cycles"] = l.cycles;
        layers.push_back(std::move(j));
    }
    ordered_json j;
    j["schema"] = "saocds-analysis-report";
    j["schema_version"] = kReportSchemaVersion;
    j["provenance"] = provenance_json(prov);
    j["layers"] = layers;
    const LatencyReport& lat = a.latency;
    j["bottleneck"] = a.layers.empty() ? ordered_json(nullptr) : ordered_json(a.layers[lat.bottleneck].name);
    j["max_stage_cycles"] = lat.max_stage_cycles;
    j["fc_bound"] = lat.fc_bound;
    return j.dump(2) + "\n";
}

} // namespace saocds::io
