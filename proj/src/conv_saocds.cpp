#include "saocds/conv_saocds.hpp"

#include <algorithm>
#include <string>

#include "saocds/error.hpp"

namespace saocds {

void saocds_layer_timestep(const RowReader& next_row, const ConvLayer& layer, const LayerNeuronParams& params,
                           PotentialBank& bank, int frac_bits, int d_bits, CostCounters& counters,
                           const RowWriter& emit) {
    const ConvDims& d = layer.dims;
    const SparseKernelCOO& kernel = layer.kernel;
    const auto entries = kernel.entries();
    const std::size_t nnz_total = entries.size();
    const std::size_t in_w = d.in_w();
    const std::size_t raw_w = layer.raw_in_width();
    if (bank.rows() != d.oc || bank.cols() != d.oi) throw DimensionError("potential bank is not OC x OI");

    const bool per_neuron = params.has_overrides();
    auto neuron_params = [&](std::size_t oc, std::size_t oi) {
        return per_neuron ? params.at(oc * d.oi + oi) : params.defaults;
    };

    // Padded input rows; the padding columns are never written.
    std::vector<std::uint8_t> buffer(d.ic * in_w, 0);
    std::vector<NeuronState> work(d.oi);
    std::vector<std::uint8_t> decayed(d.oc, 0);

    std::size_t ic_read = 0;
    std::size_t oc = 0;
    std::size_t pre_oc = d.oc;
    std::size_t nnz = 0;

    auto read_next = [&] {
        std::optional<SpikeRow> row = next_row();
        if (!row)
            throw StreamError("input stream underrun: got " + std::to_string(ic_read) + " of " +
                              std::to_string(d.ic) + " channel rows");
        if (row->size() != raw_w)
            throw DimensionError("input row has width " + std::to_string(row->size()) + ", expected " +
                                 std::to_string(raw_w));
        std::copy(row->begin(), row->end(), buffer.begin() + static_cast<std::ptrdiff_t>(ic_read * in_w + layer.pad));
        ++ic_read;
        ++counters.rows_read;
    };

    auto load_and_decay = [&](std::size_t c) {
        if (decayed[c]) throw ScheduleError("output channel " + std::to_string(c) + " decayed twice in one timestep");
        decayed[c] = 1;
        const auto stored = bank.row(c);
        for (std::size_t oi = 0; oi < d.oi; ++oi)
            work[oi] = lif_begin_timestep(stored[oi], neuron_params(c, oi), frac_bits);
        ++counters.bank_loads;
    };

    std::size_t next_emit = 0;
    auto fire_emit_store = [&](std::size_t c) {
        if (c != next_emit) throw ScheduleError("output channel " + std::to_string(c) + " emitted out of order");
        ++next_emit;
        SpikeRow out(d.oi, 0);
        auto stored = bank.row(c);
        for (std::size_t oi = 0; oi < d.oi; ++oi) {
            const FireResult f = lif_fire(work[oi], neuron_params(c, oi));
            out[oi] = f.spike ? 1 : 0;
            stored[oi] = f.state;
        }
        ++counters.bank_stores;
        emit(c, std::move(out));
    };

    auto entry_oc = [&](std::size_t n) { return n < nnz_total ? kernel.oc_of(n) : d.oc; };

    for (const IterTag& tag : layer.schedule.tags) {
        if (ic_read < d.ic) read_next();

        switch (tag.kind) {
        case IterKind::Extra:
            if (tag.index != oc || oc >= d.oc || entry_oc(nnz) == oc)
                throw ScheduleError("extra iteration for output channel " + std::to_string(tag.index) +
                                    " does not match the kernel");
            load_and_decay(oc);
            fire_emit_store(oc);
            ++oc;
            ++counters.iters_extra;
            break;

        case IterKind::Empty:
            if (nnz >= nnz_total || entry_oc(nnz) != oc || kernel.ic_of(nnz) < ic_read)
                throw ScheduleError("empty iteration scheduled while input is available");
            ++counters.iters_empty;
            break;

        case IterKind::Normal: {
            if (tag.index != nnz || nnz >= nnz_total || entry_oc(nnz) != oc || kernel.ic_of(nnz) >= ic_read)
                throw ScheduleError("normal iteration " + std::to_string(tag.index) + " does not match the kernel");
            if (oc != pre_oc) load_and_decay(oc);

            const CooEntry& e = entries[nnz];
            ++counters.weight_fetches;
            counters.weight_bits += static_cast<std::uint64_t>(d_bits);

            // Enable map: output pixel oi reads input pixel oi + ci.
            const std::uint8_t* in = buffer.data() + kernel.ic_of(nnz) * in_w + e.ci;
            std::uint64_t acc = 0;
            for (std::size_t oi = 0; oi < d.oi; ++oi) {
                if (in[oi]) {
                    work[oi].v = sat_add(work[oi].v, e.d.raw);
                    ++acc;
                }
            }
            counters.accumulations += acc;
            counters.input_fetches += d.oi;
            counters.input_bits += d.oi;

            if (entry_oc(nnz + 1) != oc) {
                fire_emit_store(oc);
                pre_oc = oc;
                ++oc;
            } else {
                pre_oc = oc;
            }
            ++nnz;
            ++counters.iters_normal;
            break;
        }
        }
    }

    if (oc != d.oc || nnz != nnz_total)
        throw ScheduleError("schedule ended after " + std::to_string(oc) + " of " + std::to_string(d.oc) +
                            " output channels");
    while (ic_read < d.ic) read_next();
}

} // namespace saocds
