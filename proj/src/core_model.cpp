#include "saocds/core_model.hpp"

#include <bit>
#include <string>
#include <tuple>

#include "saocds/error.hpp"

namespace saocds {

void ConvDims::validate() const {
    if (kw == 0 || ic == 0 || oc == 0 || oi == 0) {
        throw DimensionError("conv dims must all be positive (kw=" + std::to_string(kw) +
                             ", ic=" + std::to_string(ic) + ", oc=" + std::to_string(oc) +
                             ", oi=" + std::to_string(oi) + ")");
    }
    if (row_count() > UINT32_MAX || kw > UINT32_MAX) throw DimensionError("conv dims exceed 32-bit indices");
}

DenseKernel::DenseKernel(ConvDims d) : dims(d), weights(d.weight_count()) { d.validate(); }

DenseKernel::DenseKernel(ConvDims d, std::vector<FixedPoint16> w) : dims(d), weights(std::move(w)) {
    d.validate();
    if (weights.size() != d.weight_count()) {
        throw DimensionError("dense kernel has " + std::to_string(weights.size()) + " weights, dims need " +
                             std::to_string(d.weight_count()));
    }
}

SparseKernelCOO::SparseKernelCOO(ConvDims dims, std::vector<CooEntry> entries)
    : dims_(dims), entries_(std::move(entries)) {
    dims_.validate();
    for (std::size_t n = 0; n < entries_.size(); ++n) {
        const CooEntry& e = entries_[n];
        const std::string where = "COO entry " + std::to_string(n);
        if (e.d.raw == 0) throw CorruptionError(where + ": stored value is zero");
        if (e.ri >= dims_.row_count())
            throw CorruptionError(where + ": row index " + std::to_string(e.ri) + " out of range [0, " +
                                  std::to_string(dims_.row_count()) + ")");
        if (e.ci >= dims_.kw)
            throw CorruptionError(where + ": column index " + std::to_string(e.ci) + " out of range [0, " +
                                  std::to_string(dims_.kw) + ")");
        if (n > 0) {
            const CooEntry& p = entries_[n - 1];
            if (std::tie(p.ri, p.ci) == std::tie(e.ri, e.ci))
                throw CorruptionError(where + ": duplicate coordinate (ri=" + std::to_string(e.ri) +
                                      ", ci=" + std::to_string(e.ci) + ")");
            if (std::tie(p.ri, p.ci) > std::tie(e.ri, e.ci))
                throw CorruptionError(where + ": entries not in (oc, ic, ci) order");
        }
    }
}

double SparseKernelCOO::density() const {
    return static_cast<double>(entries_.size()) / static_cast<double>(dims_.weight_count());
}

SparseKernelCOO coo_encode(const DenseKernel& dense) {
    const ConvDims& d = dense.dims;
    if (dense.weights.size() != d.weight_count()) throw DimensionError("dense kernel size does not match dims");
    std::vector<CooEntry> entries;
    // [oc][ic][ci] memory order is already the streaming order.
    for (std::size_t oc = 0; oc < d.oc; ++oc)
        for (std::size_t ic = 0; ic < d.ic; ++ic)
            for (std::size_t ci = 0; ci < d.kw; ++ci) {
                const FixedPoint16 w = dense.at(oc, ic, ci);
                if (w.raw != 0)
                    entries.push_back({w, static_cast<std::uint32_t>(row_index(oc, ic, d.ic)),
                                       static_cast<std::uint32_t>(ci)});
            }
    return SparseKernelCOO(d, std::move(entries));
}

SparseKernelCOO coo_encode(ConvDims dims, std::span<const FixedPoint16> dense) {
    return coo_encode(DenseKernel(dims, std::vector<FixedPoint16>(dense.begin(), dense.end())));
}

DenseKernel coo_decode(const SparseKernelCOO& kernel) {
    DenseKernel out(kernel.dims());
    const ConvDims& d = kernel.dims();
    for (const CooEntry& e : kernel.entries()) {
        if (e.ri >= d.row_count() || e.ci >= d.kw) throw CorruptionError("COO index out of range during decode");
        out.at(oc_index(e.ri, d.ic), ic_index(e.ri, d.ic), e.ci) = e.d;
    }
    return out;
}

int index_bits(std::size_t n) {
    if (n <= 2) return 1;
    return static_cast<int>(std::bit_width(n - 1));
}

StorageWidths derive_widths(const ConvDims& dims, int d_bits) {
    return StorageWidths{d_bits, index_bits(dims.row_count()), index_bits(dims.kw)};
}

double break_even_density(int d_bits, int ri_bits, int ci_bits) {
    if (d_bits <= 0 || ri_bits <= 0 || ci_bits <= 0) throw ConfigError("bit widths must be positive");
    return static_cast<double>(d_bits) / static_cast<double>(d_bits + ri_bits + ci_bits);
}

std::uint64_t dense_storage_bits(const ConvDims& dims, int d_bits) {
    return static_cast<std::uint64_t>(dims.weight_count()) * static_cast<std::uint64_t>(d_bits);
}

namespace {
void check_widths(const ConvDims& dims, const StorageWidths& w) {
    if (w.d_bits <= 0) throw ConfigError("value width must be positive");
    if (w.ri_bits < index_bits(dims.row_count()))
        throw ConfigError("row-index width " + std::to_string(w.ri_bits) + " too small for " +
                          std::to_string(dims.row_count()) + " rows");
    if (w.ci_bits < index_bits(dims.kw))
        throw ConfigError("column-index width " + std::to_string(w.ci_bits) + " too small for kernel width " +
                          std::to_string(dims.kw));
}
} // namespace

std::uint64_t coo_storage_bits(const SparseKernelCOO& kernel, const StorageWidths& widths) {
    check_widths(kernel.dims(), widths);
    return static_cast<std::uint64_t>(kernel.nnz()) * static_cast<std::uint64_t>(widths.entry_bits());
}

std::uint64_t coo_bits_per_unit_density(const ConvDims& dims, const StorageWidths& widths) {
    check_widths(dims, widths);
    return static_cast<std::uint64_t>(dims.weight_count()) * static_cast<std::uint64_t>(widths.entry_bits());
}

IterationSchedule build_schedule(const SparseKernelCOO& kernel) {
    const ConvDims& d = kernel.dims();
    const auto entries = kernel.entries();
    for (std::size_t n = 1; n < entries.size(); ++n) {
        if (std::tie(entries[n - 1].ri, entries[n - 1].ci) >= std::tie(entries[n].ri, entries[n].ci))
            throw ScheduleError("kernel entries are not sorted for output-channel streaming");
    }

    const std::size_t nnz_total = entries.size();
    const std::size_t sentinel = d.oc;
    auto entry_oc = [&](std::size_t n) { return n < nnz_total ? kernel.oc_of(n) : sentinel; };

    IterationSchedule s;
    s.tags.reserve(nnz_total + d.oc + d.ic);
    std::size_t ic_read = 0;
    std::size_t oc = 0;
    std::size_t nnz = 0;
    while (oc < d.oc) {
        if (ic_read < d.ic) ++ic_read;
        if (oc != entry_oc(nnz)) {
            s.tags.push_back({IterKind::Extra, static_cast<std::uint32_t>(oc)});
            ++s.n_extra;
            ++oc;
        } else if (kernel.ic_of(nnz) < ic_read) {
            s.tags.push_back({IterKind::Normal, static_cast<std::uint32_t>(nnz)});
            ++s.n_normal;
            if (entry_oc(nnz + 1) != oc) ++oc;
            ++nnz;
        } else {
            s.tags.push_back({IterKind::Empty, 0});
            ++s.n_empty;
        }
    }
    return s;
}

} // namespace saocds
