// saocds: command-line front end for the streaming SNN simulator.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "saocds/compression.hpp"
#include "saocds/error.hpp"
#include "saocds/io/generators.hpp"
#include "saocds/io/model_file.hpp"
#include "saocds/io/report.hpp"
#include "saocds/io/sigma_delta.hpp"
#include "saocds/io/trace_file.hpp"
#include "saocds/metrics.hpp"
#include "saocds/reference_sw.hpp"
#include "saocds/runner.hpp"
#include "saocds/sweep.hpp"

namespace fs = std::filesystem;
using namespace saocds;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitError = 2;

io::Provenance provenance(const std::string& command, const NetworkSpec& net, const std::string& model_path) {
    io::Provenance p;
    p.command = command;
    p.model_hash = io::model_hash(net);
    p.model_path = model_path;
    return p;
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        io::write_text_file(path, text);
}

std::string fmt_pct(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * x);
    return buf;
}

void print_counter_table(const NetworkSpec& net, const RunResult& sw, const RunResult& st, std::size_t T) {
    std::printf("%-10s %-6s %12s %12s %12s %12s\n", "layer", "engine", "input_fetch", "weight_fetch", "accumulate",
                "bits");
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        if (!net.layers[l].weighted()) continue;
        for (const auto& [tag, r] : {std::pair{"SW", &sw}, std::pair{"GOAP", &st}}) {
            const CostCounters& c = r->layer_counters[l];
            std::printf("%-10s %-6s %12llu %12llu %12llu %12llu\n", net.layers[l].name.c_str(), tag,
                        static_cast<unsigned long long>(c.input_fetches),
                        static_cast<unsigned long long>(c.weight_fetches),
                        static_cast<unsigned long long>(c.accumulations),
                        static_cast<unsigned long long>(c.total_bits()));
        }
    }
    const auto a = sw.total().total_bits(), b = st.total().total_bits();
    std::printf("totals over %zu timestep(s): SW %llu bits, GOAP %llu bits", T, static_cast<unsigned long long>(a),
                static_cast<unsigned long long>(b));
    if (a > 0) std::printf(" (%s)", fmt_pct(static_cast<double>(b) / static_cast<double>(a)).c_str());
    std::printf("\n");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming sparse SNN accelerator simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", io::kToolVersion);

    // encode
    auto* enc = app.add_subcommand("encode", "Sigma-delta encode an IQ text frame into a spike trace");
    std::string enc_iq, enc_out;
    std::size_t enc_osr = 8;
    int enc_order = 1;
    bool enc_norm = false;
    enc->add_option("--iq", enc_iq, "IQ text file, one line per channel")->required()->check(CLI::ExistingFile);
    enc->add_option("--osr", enc_osr, "Oversampling ratio (= timesteps)")->check(CLI::PositiveNumber);
    enc->add_option("--order", enc_order, "Modulator order")->check(CLI::IsMember({1, 2}));
    enc->add_flag("--normalize", enc_norm, "Scale the frame so its peak magnitude is 1");
    enc->add_option("--out", enc_out, "Output trace")->required();

    // gen-input
    auto* gin = app.add_subcommand("gen-input", "Write a Bernoulli random spike trace");
    std::string gin_model, gin_out;
    std::size_t gin_c = 0, gin_w = 0, gin_t = 8;
    double gin_rate = 0.5;
    std::uint64_t gin_seed = 1;
    gin->add_option("--model", gin_model, "Take channels/width from this model")->check(CLI::ExistingFile);
    gin->add_option("--channels", gin_c, "Channels");
    gin->add_option("--width", gin_w, "Pixels per channel");
    gin->add_option("--timesteps", gin_t, "Timesteps");
    gin->add_option("--rate", gin_rate, "Fire rate")->check(CLI::Range(0.0, 1.0));
    gin->add_option("--seed", gin_seed, "Seed");
    gin->add_option("--out", gin_out, "Output trace")->required();

    // gen-model
    auto* gmod = app.add_subcommand("gen-model", "Write a built-in network as a model file");
    std::string gmod_kind = "default", gmod_out;
    std::uint64_t gmod_seed = 1;
    double gmod_gain = 2.0;
    int gmod_frac = kDefaultFracBits;
    gmod->add_option("--kind", gmod_kind, "default | small-conv | layer2")
        ->check(CLI::IsMember({"default", "small-conv", "layer2"}));
    gmod->add_option("--seed", gmod_seed, "Weight seed");
    gmod->add_option("--gain", gmod_gain, "Weight init gain");
    gmod->add_option("--frac-bits", gmod_frac, "Fractional bits")->check(CLI::Range(0, 15));
    gmod->add_option("--out", gmod_out, "Output model")->required();

    // compress
    auto* cmp = app.add_subcommand("compress", "Prune and requantize a model to a per-layer density profile");
    std::string cmp_model, cmp_density, cmp_out, cmp_report;
    int cmp_frac = -1;
    cmp->add_option("--model", cmp_model, "Input model")->required()->check(CLI::ExistingFile);
    cmp->add_option("--density", cmp_density, "Profile, e.g. 25-20-15-20-25 or 0.1")->required();
    cmp->add_option("--frac-bits", cmp_frac, "Fractional bits of the output (default: keep)")->check(CLI::Range(0, 15));
    cmp->add_option("--out", cmp_out, "Output model")->required();
    cmp->add_option("--report", cmp_report, "Per-layer summary (JSON)");

    // run
    auto* run = app.add_subcommand("run", "Run a model on a spike trace");
    std::string run_engine = "saocds", run_model, run_input, run_out, run_report, run_mode = "pipelined";
    std::size_t run_depth = 2;
    run->add_option("--engine", run_engine, "saocds | sw")->check(CLI::IsMember({"saocds", "sw"}));
    run->add_option("--model", run_model, "Model file")->required()->check(CLI::ExistingFile);
    run->add_option("--input", run_input, "Input trace")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "Output spike trace");
    run->add_option("--report", run_report, "Run report (JSON), '-' for stdout");
    run->add_option("--mode", run_mode, "pipelined | sequential (saocds engine)")
        ->check(CLI::IsMember({"pipelined", "sequential"}));
    run->add_option("--queue-depth", run_depth, "Rows per inter-layer queue")->check(CLI::PositiveNumber);

    // compare
    auto* cmpr = app.add_subcommand("compare", "Run both engines and check bit-equality");
    std::string cmpr_model, cmpr_input, cmpr_report;
    cmpr->add_option("--model", cmpr_model, "Model file")->required()->check(CLI::ExistingFile);
    cmpr->add_option("--input", cmpr_input, "Input trace")->required()->check(CLI::ExistingFile);
    cmpr->add_option("--report", cmpr_report, "Comparison report (JSON)");

    // sweep
    auto* swp = app.add_subcommand("sweep", "Accumulation ratio and latency over uniform densities");
    std::string swp_model, swp_dens = "0.05..1.0", swp_out;
    SweepConfig swp_cfg;
    swp->add_option("--model", swp_model, "Dense model file")->required()->check(CLI::ExistingFile);
    swp->add_option("--densities", swp_dens, "a..b[:step] or a comma list");
    swp->add_option("--rate", swp_cfg.rate, "Input fire rate")->check(CLI::Range(0.0, 1.0));
    swp->add_option("--seed", swp_cfg.seed, "Input seed");
    swp->add_option("--timesteps", swp_cfg.timesteps, "Timesteps")->check(CLI::PositiveNumber);
    swp->add_flag("--parallel", swp_cfg.parallel, "One density per thread");
    swp->add_option("--out", swp_out, "CSV output, '-' for stdout");

    // analyze
    auto* ana = app.add_subcommand("analyze", "Storage, schedule and bottleneck report");
    std::string ana_model, ana_report;
    ana->add_option("--model", ana_model, "Model file")->required()->check(CLI::ExistingFile);
    ana->add_option("--report", ana_report, "Also write the report as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*enc) {
            io::IqFrame iq = io::load_iq_text(enc_iq);
            if (enc_norm) iq = io::normalize_peak(std::move(iq));
            const io::SigmaDeltaResult r = io::sigma_delta_encode(iq, {enc_osr, enc_order});
            if (r.clipped) std::cerr << "warning: " << r.clipped << " samples outside [-1, 1] were clipped\n";
            io::save_trace(enc_out, r.spikes);
            std::cout << "wrote " << enc_out << ": T=" << r.spikes.timesteps() << " C=" << r.spikes.channels()
                      << " W=" << r.spikes.width() << "\n";
        } else if (*gin) {
            if (!gin_model.empty()) {
                const NetworkSpec net = io::load_model(gin_model);
                gin_c = net.input.channels;
                gin_w = net.input.width;
            }
            if (gin_c == 0 || gin_w == 0) throw ConfigError("give --model or both --channels and --width");
            io::save_trace(gin_out, io::gen_bernoulli_input(gin_c, gin_w, gin_t, gin_rate, gin_seed));
        } else if (*gmod) {
            const RandomWeightConfig cfg{gmod_seed, gmod_gain};
            NetworkSpec net;
            if (gmod_kind == "default") net = default_network(cfg, gmod_frac);
            else if (gmod_kind == "layer2") net = single_conv_network(ConvDims{11, 16, 32, 64}, cfg, gmod_frac);
            else net = small_conv_example();
            io::save_model(gmod_out, net);
        } else if (*cmp) {
            const NetworkSpec net = io::load_model(cmp_model);
            std::vector<double> profile = parse_density_profile(cmp_density);
            const std::size_t weighted = net.weighted_layers().size();
            if (profile.size() == 1 && weighted > 1) profile.assign(weighted, profile.front());
            CompressionReport rep;
            const NetworkSpec out = apply_density_profile(net, profile, cmp_frac, &rep);
            io::save_model(cmp_out, out);
            for (const LayerCompression& l : rep.layers)
                std::printf("%-10s weights %8zu  kept %8zu  nnz %8zu  target %s  achieved %s%s\n", l.name.c_str(),
                            l.weights, l.kept, l.nnz, fmt_pct(l.target).c_str(), fmt_pct(l.achieved).c_str(),
                            l.bumped ? "  (small weights moved to 1 ulp)" : "");
            if (!cmp_report.empty()) {
                std::ostringstream os;
                os << "{\n  \"model_hash\": \"" << io::hex64(io::model_hash(out)) << "\",\n  \"layers\": [\n";
                for (std::size_t i = 0; i < rep.layers.size(); ++i) {
                    const LayerCompression& l = rep.layers[i];
                    os << "    {\"name\": \"" << l.name << "\", \"weights\": " << l.weights << ", \"kept\": " << l.kept
                       << ", \"nnz\": " << l.nnz << ", \"bumped\": " << l.bumped << ", \"target\": " << l.target
                       << ", \"achieved\": " << l.achieved << "}" << (i + 1 < rep.layers.size() ? "," : "") << "\n";
                }
                os << "  ]\n}\n";
                io::write_text_file(cmp_report, os.str());
            }
        } else if (*run) {
            const NetworkSpec net = io::load_model(run_model);
            const SpikeTensor input = io::load_trace(run_input);
            RunResult r;
            if (run_engine == "sw") {
                r = sw_network_run(net, input);
            } else {
                RunOptions opt;
                opt.mode = run_mode == "sequential" ? ExecutionMode::Sequential : ExecutionMode::Pipelined;
                opt.queue_depth_rows = run_depth;
                r = saocds_network_run(net, input, opt);
            }
            if (!run_out.empty()) io::save_trace(run_out, r.output);
            io::Provenance p = provenance("run", net, run_model);
            p.input_path = run_input;
            p.config = {{"engine", run_engine}, {"mode", run_mode}, {"queue_depth", std::to_string(run_depth)}};
            if (!run_report.empty()) write_or_print(run_report, io::run_report_json(net, r, run_engine, p));
            if (run_report != "-")
                std::cout << "T=" << input.timesteps() << " output spikes " << r.output.popcount()
                          << ", accumulations " << r.total().accumulations << ", bottleneck "
                          << (net.layers.empty() ? "-" : net.layers[r.latency.bottleneck].name) << "\n";
        } else if (*cmpr) {
            const NetworkSpec net = io::load_model(cmpr_model);
            const SpikeTensor input = io::load_trace(cmpr_input);
            RunOptions opt;
            opt.capture_layer_outputs = true;
            const RunResult st = saocds_network_run(net, input, opt);
            const RunResult sw = sw_network_run(net, input, true);
            const std::optional<SpikeMismatch> mm =
                input.timesteps() == 0 ? std::nullopt : first_spike_mismatch(st, sw);
            print_counter_table(net, sw, st, input.timesteps());
            if (!cmpr_report.empty()) {
                io::Provenance p = provenance("compare", net, cmpr_model);
                p.input_path = cmpr_input;
                io::write_text_file(cmpr_report, io::compare_report_json(net, st, sw, mm, p));
            }
            if (mm) {
                std::cerr << "MISMATCH at t=" << mm->t << " layer=" << mm->layer << " ("
                          << net.layers[mm->layer].name << ") oc=" << mm->channel << " oi=" << mm->pixel << "\n";
                return kExitMismatch;
            }
            std::cout << "outputs equal\n";
        } else if (*swp) {
            const NetworkSpec net = io::load_model(swp_model);
            swp_cfg.densities = parse_density_list(swp_dens);
            write_or_print(swp_out, sweep_csv(density_sweep(net, swp_cfg)));
        } else if (*ana) {
            const NetworkSpec net = io::load_model(ana_model);
            const NetworkAnalysis a = analyze_network(net);
            std::printf("%-10s %-7s %8s %8s %8s %5s %10s %10s %12s %10s %6s %6s %6s %8s\n", "layer", "kind", "weights",
                        "nnz", "density", "idx", "dense", "coo", "coo/unit", "break-even", "reps", "empty", "extra",
                        "cycles");
            for (const LayerAnalysis& l : a.layers) {
                if (l.kind == LayerKind::Conv) {
                    std::printf("%-10s %-7s %8zu %8zu %8s %2d/%-2d %10llu %10llu %12llu %10s %6zu %6zu %6zu %8llu\n",
                                l.name.c_str(), to_string(l.kind), l.weights, l.nnz, fmt_pct(l.density).c_str(),
                                l.widths.ri_bits, l.widths.ci_bits, static_cast<unsigned long long>(l.dense_bits),
                                static_cast<unsigned long long>(l.coo_bits),
                                static_cast<unsigned long long>(l.coo_bits_per_unit_density),
                                fmt_pct(l.break_even).c_str(), l.reps, l.empty, l.extra,
                                static_cast<unsigned long long>(l.cycles));
                } else {
                    std::printf("%-10s %-7s %8zu %8zu %8s %5s %10llu %10s %12s %10s %6s %6s %6s %8llu\n",
                                l.name.c_str(), to_string(l.kind), l.weights, l.nnz,
                                l.weights ? fmt_pct(l.density).c_str() : "-", "-",
                                static_cast<unsigned long long>(l.dense_bits), "-", "-", "-", "-", "-", "-",
                                static_cast<unsigned long long>(l.cycles));
                }
            }
            std::printf("bottleneck: %s (%llu cycles/timestep)%s\n", a.layers[a.latency.bottleneck].name.c_str(),
                        static_cast<unsigned long long>(a.latency.max_stage_cycles),
                        a.latency.fc_bound ? ", FC-bound" : "");
            if (!ana_report.empty())
                io::write_text_file(ana_report, io::analysis_report_json(a, provenance("analyze", net, ana_model)));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return 0;
}
