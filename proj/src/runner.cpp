#include "saocds/runner.hpp"

#include <exception>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "saocds/conv_saocds.hpp"
#include "saocds/error.hpp"
#include "saocds/fc_mvtu.hpp"
#include "saocds/pipeline.hpp"

namespace saocds {

namespace {

struct RowMessage {
    std::uint32_t t = 0;
    std::uint32_t channel = 0;
    SpikeRow bits;
};

/// Sequential state machine for one layer; shared by both execution modes.
class LayerEngine {
public:
    LayerEngine(const NetworkSpec& net, std::size_t index, Shape in)
        : net_(net), layer_(net.layers[index]), in_(in) {
        switch (layer_.kind()) {
        case LayerKind::Conv: bank_ = PotentialBank(layer_.conv().dims.oc, layer_.conv().dims.oi); break;
        case LayerKind::Fc: bank_ = PotentialBank(1, layer_.fc().weights.out()); break;
        case LayerKind::MaxPool: break;
        }
    }

    void timestep(const RowReader& read, const RowWriter& write, CostCounters& cnt) {
        switch (layer_.kind()) {
        case LayerKind::Conv:
            saocds_layer_timestep(read, layer_.conv(), layer_.neuron, bank_, net_.frac_bits, net_.d_bits, cnt, write);
            break;
        case LayerKind::MaxPool:
            for (std::size_t c = 0; c < in_.channels; ++c) {
                auto row = read();
                if (!row) throw StreamError("layer '" + layer_.name + "': input stream underrun");
                write(c, maxpool_row(*row, layer_.pool().window, cnt));
            }
            break;
        case LayerKind::Fc: {
            SpikeRow flat;
            flat.reserve(in_.channels * in_.width);
            for (std::size_t c = 0; c < in_.channels; ++c) {
                auto row = read();
                if (!row) throw StreamError("layer '" + layer_.name + "': input stream underrun");
                flat.insert(flat.end(), row->begin(), row->end());
                ++cnt.rows_read;
            }
            write(0, fc_timestep(flat, layer_.fc().weights, bank_, layer_.neuron, net_.frac_bits, net_.d_bits, cnt));
            break;
        }
        }
    }

    const PotentialBank& bank() const { return bank_; }

private:
    const NetworkSpec& net_;
    const LayerSpec& layer_;
    Shape in_;
    PotentialBank bank_;
};

std::string stage_name(const NetworkSpec& net, std::size_t stage) {
    if (stage == 0) return "input";
    if (stage > net.layers.size()) return "output";
    return net.layers[stage - 1].name;
}

void run_sequential(const NetworkSpec& net, const std::vector<Shape>& shapes, const SpikeTensor& input,
                    std::vector<LayerEngine>& engines, RunResult& result, bool capture) {
    const std::size_t L = net.layers.size();
    for (std::size_t t = 0; t < input.timesteps(); ++t) {
        std::vector<SpikeRow> rows;
        for (std::size_t c = 0; c < input.channels(); ++c) {
            auto r = input.row(t, c);
            rows.emplace_back(r.begin(), r.end());
        }
        for (std::size_t l = 0; l < L; ++l) {
            std::size_t cursor = 0;
            std::vector<SpikeRow> next;
            RowReader read = [&]() -> std::optional<SpikeRow> {
                if (cursor >= rows.size()) return std::nullopt;
                return std::move(rows[cursor++]);
            };
            RowWriter write = [&](std::size_t ch, SpikeRow&& row) {
                if (ch != next.size())
                    throw StreamError("layer '" + net.layers[l].name + "' emitted channel " + std::to_string(ch) +
                                      " out of order");
                if (capture) result.layer_outputs[l].set_row(t, ch, row);
                next.push_back(std::move(row));
            };
            engines[l].timestep(read, write, result.layer_counters[l]);
            if (cursor != rows.size())
                throw StreamError("layer '" + net.layers[l].name + "' left " + std::to_string(rows.size() - cursor) +
                                  " input rows unread");
            if (next.size() != shapes[l + 1].channels)
                throw StreamError("layer '" + net.layers[l].name + "' emitted " + std::to_string(next.size()) +
                                  " rows, expected " + std::to_string(shapes[l + 1].channels));
            rows = std::move(next);
        }
        for (std::size_t c = 0; c < rows.size(); ++c) result.output.set_row(t, c, rows[c]);
    }
}

void run_pipelined(const NetworkSpec& net, const std::vector<Shape>& shapes, const SpikeTensor& input,
                   std::vector<LayerEngine>& engines, RunResult& result, const RunOptions& opt) {
    const std::size_t L = net.layers.size();
    const std::size_t T = input.timesteps();
    // stage 0 = input source, 1..L = layers, L+1 = output sink (this thread)
    PipelineMonitor monitor(L + 2);
    std::vector<std::unique_ptr<BoundedQueue<RowMessage>>> queues;
    for (std::size_t s = 0; s <= L; ++s)
        queues.push_back(std::make_unique<BoundedQueue<RowMessage>>(
            opt.queue_depth_rows, monitor, s, s + 1, stage_name(net, s) + "->" + stage_name(net, s + 1)));

    std::mutex err_mu;
    std::exception_ptr first_error;
    auto fail = [&](std::exception_ptr e, const std::string& what) {
        {
            std::lock_guard lk(err_mu);
            if (!first_error) first_error = e;
        }
        monitor.abort(what);
        for (auto& q : queues) q->notify();
    };

    // Pops the next row of queue q, checking timestep and channel order.
    auto make_reader = [&](std::size_t q, const std::size_t& t, std::size_t& expect) -> RowReader {
        return [&, q]() -> std::optional<SpikeRow> {
            auto msg = queues[q]->pop();
            if (!msg) return std::nullopt;
            if (msg->t != t || msg->channel != expect)
                throw StreamError("queue '" + queues[q]->name() + "': expected row (t=" + std::to_string(t) +
                                  ", ch=" + std::to_string(expect) + "), got (t=" + std::to_string(msg->t) +
                                  ", ch=" + std::to_string(msg->channel) + ")");
            ++expect;
            return std::move(msg->bits);
        };
    };

    std::vector<std::thread> threads;
    threads.emplace_back([&] {
        try {
            for (std::size_t t = 0; t < T; ++t)
                for (std::size_t c = 0; c < input.channels(); ++c) {
                    auto r = input.row(t, c);
                    queues[0]->push(RowMessage{static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(c),
                                               SpikeRow(r.begin(), r.end())});
                }
            queues[0]->close();
            monitor.finished(0);
        } catch (const std::exception& e) {
            fail(std::current_exception(), e.what());
        }
    });

    for (std::size_t l = 0; l < L; ++l) {
        threads.emplace_back([&, l] {
            try {
                std::size_t t = 0;
                std::size_t expect = 0;
                RowReader read = make_reader(l, t, expect);
                std::size_t emitted = 0;
                RowWriter write = [&](std::size_t ch, SpikeRow&& row) {
                    if (ch != emitted)
                        throw StreamError("layer '" + net.layers[l].name + "' emitted channel " + std::to_string(ch) +
                                          " out of order");
                    ++emitted;
                    if (opt.capture_layer_outputs) result.layer_outputs[l].set_row(t, ch, row);
                    queues[l + 1]->push(
                        RowMessage{static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(ch), std::move(row)});
                };
                for (; t < T; ++t) {
                    expect = 0;
                    emitted = 0;
                    engines[l].timestep(read, write, result.layer_counters[l]);
                    if (expect != shapes[l].channels)
                        throw StreamError("layer '" + net.layers[l].name + "' consumed " + std::to_string(expect) +
                                          " of " + std::to_string(shapes[l].channels) + " rows");
                    if (emitted != shapes[l + 1].channels)
                        throw StreamError("layer '" + net.layers[l].name + "' emitted " + std::to_string(emitted) +
                                          " rows, expected " + std::to_string(shapes[l + 1].channels));
                }
                if (queues[l]->pop())
                    throw StreamError("queue '" + queues[l]->name() + "' carries more rows than the layer consumes");
                queues[l + 1]->close();
                monitor.finished(l + 1);
            } catch (const std::exception& e) {
                fail(std::current_exception(), e.what());
            }
        });
    }

    try {
        const Shape out = shapes.back();
        std::size_t t = 0;
        std::size_t expect = 0;
        RowReader read = make_reader(L, t, expect);
        for (; t < T; ++t) {
            expect = 0;
            for (std::size_t c = 0; c < out.channels; ++c) {
                auto row = read();
                if (!row) throw StreamError("network output stream ended early");
                result.output.set_row(t, c, *row);
            }
        }
        if (queues[L]->pop()) throw StreamError("network produced more rows than expected");
        monitor.finished(L + 1);
    } catch (const std::exception& e) {
        fail(std::current_exception(), e.what());
    }

    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

RunResult saocds_network_run(const NetworkSpec& net, const SpikeTensor& input, const RunOptions& options) {
    net.validate();
    if (input.channels() != net.input.channels || input.width() != net.input.width)
        throw DimensionError("input tensor is (" + std::to_string(input.channels()) + ", " +
                             std::to_string(input.width()) + "), network expects (" +
                             std::to_string(net.input.channels) + ", " + std::to_string(net.input.width) + ")");
    if (options.queue_depth_rows == 0) throw ConfigError("queue depth must be at least one row");

    const std::vector<Shape> shapes = net.shapes();
    const std::size_t L = net.layers.size();
    const std::size_t T = input.timesteps();

    std::vector<LayerEngine> engines;
    engines.reserve(L);
    for (std::size_t l = 0; l < L; ++l) engines.emplace_back(net, l, shapes[l]);

    RunResult result;
    result.layer_counters.assign(L, CostCounters{});
    result.output = SpikeTensor(T, shapes.back().channels, shapes.back().width);
    if (options.capture_layer_outputs)
        for (std::size_t l = 0; l < L; ++l)
            result.layer_outputs.emplace_back(T, shapes[l + 1].channels, shapes[l + 1].width);

    if (T > 0) {
        if (options.mode == ExecutionMode::Sequential)
            run_sequential(net, shapes, input, engines, result, options.capture_layer_outputs);
        else
            run_pipelined(net, shapes, input, engines, result, options);
    }

    if (net.readout_potentials)
        for (const NeuronState& s : engines.back().bank().states())
            result.final_potentials.push_back(to_double(s.v, net.frac_bits));
    result.latency = latency_model(net, T);
    return result;
}

std::optional<SpikeMismatch> first_spike_mismatch(const RunResult& a, const RunResult& b) {
    if (a.layer_outputs.size() != b.layer_outputs.size() || a.layer_outputs.empty())
        throw DimensionError("spike comparison needs captured layer outputs from both runs");
    for (std::size_t l = 0; l < a.layer_outputs.size(); ++l) {
        const SpikeTensor& x = a.layer_outputs[l];
        const SpikeTensor& y = b.layer_outputs[l];
        if (x.timesteps() != y.timesteps() || x.channels() != y.channels() || x.width() != y.width())
            throw DimensionError("layer " + std::to_string(l) + " outputs differ in shape");
    }
    const std::size_t T = a.layer_outputs.front().timesteps();
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t l = 0; l < a.layer_outputs.size(); ++l) {
            const SpikeTensor& x = a.layer_outputs[l];
            const SpikeTensor& y = b.layer_outputs[l];
            for (std::size_t c = 0; c < x.channels(); ++c)
                for (std::size_t p = 0; p < x.width(); ++p)
                    if (x.at(t, c, p) != y.at(t, c, p)) return SpikeMismatch{t, l, c, p};
        }
    return std::nullopt;
}

} // namespace saocds
