#ifndef SAOCDS_CORE_MODEL_HPP
#define SAOCDS_CORE_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "saocds/fixed_point.hpp"

namespace saocds {

/// Height-1, stride-1 convolution geometry. in_w is the padded input width.
struct ConvDims {
    std::size_t kw = 0;
    std::size_t ic = 0;
    std::size_t oc = 0;
    std::size_t oi = 0;

    constexpr std::size_t in_w() const { return oi + kw - 1; }
    constexpr std::size_t weight_count() const { return kw * ic * oc; }
    constexpr std::size_t row_count() const { return ic * oc; }

    void validate() const;

    friend constexpr bool operator==(const ConvDims&, const ConvDims&) = default;
};

// Row-index decoding of the merged (output channel, input channel) index.
constexpr std::size_t ic_index(std::size_t ri, std::size_t n_ic) { return ri % n_ic; }
constexpr std::size_t oc_index(std::size_t ri, std::size_t n_ic) { return ri / n_ic; }
constexpr std::size_t row_index(std::size_t oc, std::size_t ic, std::size_t n_ic) { return oc * n_ic + ic; }

/// Dense kernel, laid out [oc][ic][ci].
struct DenseKernel {
    ConvDims dims;
    std::vector<FixedPoint16> weights;

    DenseKernel() = default;
    explicit DenseKernel(ConvDims d);
    DenseKernel(ConvDims d, std::vector<FixedPoint16> w);

    std::size_t offset(std::size_t oc, std::size_t ic, std::size_t ci) const {
        return (oc * dims.ic + ic) * dims.kw + ci;
    }
    FixedPoint16& at(std::size_t oc, std::size_t ic, std::size_t ci) { return weights[offset(oc, ic, ci)]; }
    FixedPoint16 at(std::size_t oc, std::size_t ic, std::size_t ci) const { return weights[offset(oc, ic, ci)]; }

    friend bool operator==(const DenseKernel&, const DenseKernel&) = default;
};

struct CooEntry {
    FixedPoint16 d;
    std::uint32_t ri = 0;
    std::uint32_t ci = 0;

    friend constexpr bool operator==(const CooEntry&, const CooEntry&) = default;
};

/// Nonzero weights in output-channel streaming order, i.e. sorted by
/// (oc, ic, ci), which is the same as sorting by (ri, ci).
class SparseKernelCOO {
public:
    SparseKernelCOO() = default;

    /// Validates range, nonzero values, ordering and uniqueness.
    SparseKernelCOO(ConvDims dims, std::vector<CooEntry> entries);

    const ConvDims& dims() const { return dims_; }
    std::span<const CooEntry> entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    double density() const;

    std::size_t oc_of(std::size_t n) const { return oc_index(entries_[n].ri, dims_.ic); }
    std::size_t ic_of(std::size_t n) const { return ic_index(entries_[n].ri, dims_.ic); }

    friend bool operator==(const SparseKernelCOO&, const SparseKernelCOO&) = default;

private:
    ConvDims dims_;
    std::vector<CooEntry> entries_;
};

SparseKernelCOO coo_encode(const DenseKernel& dense);
SparseKernelCOO coo_encode(ConvDims dims, std::span<const FixedPoint16> dense);
DenseKernel coo_decode(const SparseKernelCOO& kernel);

// ---- storage accounting ----------------------------------------------------

/// Bits needed to address n distinct values; at least one bit.
int index_bits(std::size_t n);

struct StorageWidths {
    int d_bits = kWeightBits;
    int ri_bits = 0;
    int ci_bits = 0;

    int entry_bits() const { return d_bits + ri_bits + ci_bits; }
};

StorageWidths derive_widths(const ConvDims& dims, int d_bits = kWeightBits);

/// Density below which COO storage is smaller than dense storage.
double break_even_density(int d_bits, int ri_bits, int ci_bits);

std::uint64_t dense_storage_bits(const ConvDims& dims, int d_bits = kWeightBits);
std::uint64_t coo_storage_bits(const SparseKernelCOO& kernel, const StorageWidths& widths);
/// COO bits at density 1, i.e. the coefficient of X in "bits = c * X".
std::uint64_t coo_bits_per_unit_density(const ConvDims& dims, const StorageWidths& widths);

// ---- iteration schedule ----------------------------------------------------

enum class IterKind : std::uint8_t { Normal, Empty, Extra };

struct IterTag {
    IterKind kind = IterKind::Empty;
    // Normal: nonzero index. Extra: output channel. Empty: unused.
    std::uint32_t index = 0;

    friend constexpr bool operator==(const IterTag&, const IterTag&) = default;
};

struct IterationSchedule {
    std::vector<IterTag> tags;
    std::size_t n_normal = 0;
    std::size_t n_empty = 0;
    std::size_t n_extra = 0;

    std::size_t reps() const { return tags.size(); }

    friend bool operator==(const IterationSchedule&, const IterationSchedule&) = default;
};

/// Precomputes, per timestep, which control branch every streaming iteration
/// takes: one input channel is read per iteration until all are read; a
/// nonzero whose input channel has not been read yet stalls (Empty); an
/// output channel without nonzeros gets a decay/fire-only iteration (Extra).
IterationSchedule build_schedule(const SparseKernelCOO& kernel);

} // namespace saocds

#endif
