#include "doctest.h"

#include "oracles.hpp"
#include "saocds/core_model.hpp"
#include "saocds/error.hpp"
#include "saocds/rng.hpp"

using namespace saocds;

namespace {

SparseKernelCOO kernel_at(const ConvDims& d, std::initializer_list<std::tuple<std::size_t, std::size_t, std::size_t>> at) {
    DenseKernel k(d);
    for (auto [oc, ic, ci] : at) k.at(oc, ic, ci) = FixedPoint16{1};
    return coo_encode(k);
}

std::vector<oracle::Tag> kinds(const IterationSchedule& s) {
    std::vector<oracle::Tag> out;
    for (const IterTag& t : s.tags)
        out.push_back(t.kind == IterKind::Normal ? oracle::Tag::Normal
                      : t.kind == IterKind::Empty ? oracle::Tag::Empty
                                                  : oracle::Tag::Extra);
    return out;
}

} // namespace

TEST_CASE("no gaps means no empty or extra iterations") {
    const ConvDims d{3, 4, 3, 8};
    DenseKernel k(d);
    for (std::size_t oc = 0; oc < d.oc; ++oc)
        for (std::size_t ic = 0; ic < d.ic; ++ic) k.at(oc, ic, (oc + ic) % d.kw) = FixedPoint16{5};
    const IterationSchedule s = build_schedule(coo_encode(k));
    CHECK(s.n_empty == 0);
    CHECK(s.n_extra == 0);
    CHECK(s.reps() == 12);
}

TEST_CASE("a skipped input channel in output channel 0 costs one empty iteration") {
    const SparseKernelCOO k = kernel_at(ConvDims{3, 3, 4, 4}, {{0, 0, 1}, {0, 2, 0}});
    const IterationSchedule s = build_schedule(k);
    CHECK(s.n_empty == 1);
    REQUIRE(s.tags.size() >= 3);
    CHECK(s.tags[0].kind == IterKind::Normal);
    CHECK(s.tags[1].kind == IterKind::Empty);
    CHECK(s.tags[2].kind == IterKind::Normal);
    // output channels 1..3 own nothing
    CHECK(s.n_extra == 3);
}

TEST_CASE("an output channel without weights gets exactly one extra iteration") {
    const SparseKernelCOO k = kernel_at(ConvDims{2, 2, 3, 4}, {{0, 0, 0}, {0, 1, 1}, {2, 0, 0}, {2, 1, 0}});
    const IterationSchedule s = build_schedule(k);
    CHECK(s.n_extra == 1);
    CHECK(s.n_empty == 0);
    std::size_t extras_for_1 = 0;
    for (const IterTag& t : s.tags)
        if (t.kind == IterKind::Extra) extras_for_1 += t.index == 1;
    CHECK(extras_for_1 == 1);
}

TEST_CASE("empty kernel is all extra iterations") {
    const IterationSchedule s = build_schedule(SparseKernelCOO(ConvDims{3, 5, 4, 2}, {}));
    CHECK(s.n_extra == 4);
    CHECK(s.reps() == 4);
}

TEST_CASE("empty iterations can follow the first output-channel change when channel 0 is short") {
    // oc 0 finishes on its first nonzero; oc 1 then waits for input channel 2
    const SparseKernelCOO k = kernel_at(ConvDims{1, 3, 2, 4}, {{0, 0, 0}, {1, 2, 0}});
    const IterationSchedule s = build_schedule(k);
    REQUIRE(s.tags.size() == 3);
    CHECK(s.tags[0].kind == IterKind::Normal);
    CHECK(s.tags[1].kind == IterKind::Empty);
    CHECK(s.tags[2].kind == IterKind::Normal);
}

TEST_CASE("schedule properties on random kernels, checked against the reference walk") {
    Rng rng(7);
    for (int trial = 0; trial < 3000; ++trial) {
        const ConvDims d{1 + rng.below(5), 1 + rng.below(12), 1 + rng.below(8), 4};
        const double density = rng.uniform(0.0, 1.0);
        const SparseKernelCOO k = oracle::random_kernel(rng, d, density);
        const IterationSchedule s = build_schedule(k);

        REQUIRE(kinds(s) == oracle::schedule(oracle::coords(k), d.ic, d.oc));
        REQUIRE(s.reps() == k.nnz() + s.n_empty + s.n_extra);
        REQUIRE(s.n_normal == k.nnz());

        std::vector<std::size_t> per_oc(d.oc, 0);
        for (std::size_t n = 0; n < k.nnz(); ++n) ++per_oc[k.oc_of(n)];
        std::size_t next_nnz = 0, next_extra_min = 0;
        std::vector<std::size_t> extras(d.oc, 0);
        for (std::size_t i = 0; i < s.tags.size(); ++i) {
            const IterTag& t = s.tags[i];
            if (t.kind == IterKind::Normal) {
                REQUIRE(t.index == next_nnz);
                ++next_nnz;
            } else if (t.kind == IterKind::Extra) {
                REQUIRE(t.index >= next_extra_min);
                next_extra_min = t.index + 1;
                ++extras[t.index];
            } else {
                // an empty iteration means some input channel was still unread
                REQUIRE(i + 1 < d.ic);
            }
        }
        for (std::size_t oc = 0; oc < d.oc; ++oc) REQUIRE(extras[oc] == (per_oc[oc] == 0 ? 1u : 0u));
    }
}
