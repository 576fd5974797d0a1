#ifndef SAOCDS_COUNTERS_HPP
#define SAOCDS_COUNTERS_HPP

#include <cstdint>

namespace saocds {

/// Per-layer tallies, accumulated over all timesteps of a run.
struct CostCounters {
    std::uint64_t input_fetches = 0;   // 1-bit reads from the input buffer
    std::uint64_t weight_fetches = 0;
    std::uint64_t accumulations = 0;
    std::uint64_t input_bits = 0;
    std::uint64_t weight_bits = 0;
    std::uint64_t iters_normal = 0;
    std::uint64_t iters_empty = 0;
    std::uint64_t iters_extra = 0;
    std::uint64_t bank_loads = 0;      // potential rows loaded (conv: per oc, FC: per neuron)
    std::uint64_t bank_stores = 0;
    std::uint64_t rows_read = 0;       // input channel rows pulled from the stream

    std::uint64_t total_bits() const { return input_bits + weight_bits; }
    std::uint64_t iterations() const { return iters_normal + iters_empty + iters_extra; }

    CostCounters& operator+=(const CostCounters& o) {
        input_fetches += o.input_fetches;
        weight_fetches += o.weight_fetches;
        accumulations += o.accumulations;
        input_bits += o.input_bits;
        weight_bits += o.weight_bits;
        iters_normal += o.iters_normal;
        iters_empty += o.iters_empty;
        iters_extra += o.iters_extra;
        bank_loads += o.bank_loads;
        bank_stores += o.bank_stores;
        rows_read += o.rows_read;
        return *this;
    }

    friend bool operator==(const CostCounters&, const CostCounters&) = default;
};

} // namespace saocds

#endif
