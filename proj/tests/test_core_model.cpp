#include "doctest.h"

#include "oracles.hpp"
#include "saocds/core_model.hpp"
#include "saocds/error.hpp"
#include "saocds/rng.hpp"

using namespace saocds;

TEST_CASE("row index decoding") {
    CHECK(ic_index(0, 2) == 0);
    CHECK(ic_index(5, 2) == 1);
    CHECK(oc_index(0, 2) == 0);
    CHECK(oc_index(5, 2) == 2);
    Rng rng(1);
    for (int i = 0; i < 5000; ++i) {
        const std::size_t n_ic = 1 + rng.below(64);
        const std::size_t ri = rng.below(1u << 20);
        CHECK(ic_index(ri, n_ic) == ri - (ri / n_ic) * n_ic);
        CHECK(oc_index(ri, n_ic) * n_ic + ic_index(ri, n_ic) == ri);
    }
    CHECK(ic_index(17, 16) == 1);
    CHECK(oc_index(17, 16) == 1);
}

TEST_CASE("coo_encode of trivial kernels") {
    const ConvDims d{3, 2, 2, 4};
    DenseKernel k(d);
    CHECK(coo_encode(k).nnz() == 0);

    k.at(1, 0, 2) = FixedPoint16{77};
    const SparseKernelCOO c = coo_encode(k);
    REQUIRE(c.nnz() == 1);
    CHECK(c.entries()[0] == CooEntry{FixedPoint16{77}, 2, 2});
    CHECK(coo_decode(c) == k);
    CHECK(coo_decode(SparseKernelCOO(ConvDims{3, 2, 4, 4}, {})).weights == std::vector<FixedPoint16>(24));
}

TEST_CASE("coo round trip against brute force on random kernels") {
    Rng rng(2);
    for (int trial = 0; trial < 1000; ++trial) {
        const ConvDims d{1 + rng.below(5), 1 + rng.below(8), 1 + rng.below(8), 1 + rng.below(8)};
        DenseKernel k(d);
        std::size_t count = 0;
        for (auto& w : k.weights)
            if (rng.bernoulli(0.5)) {
                w = oracle::random_weight(rng, 1.0, 8);
                ++count;
            }
        const SparseKernelCOO c = coo_encode(k);
        REQUIRE(c.nnz() == count);
        REQUIRE(coo_decode(c) == k);
        // streaming order: oc non-decreasing, ic non-decreasing within an oc
        for (std::size_t n = 1; n < c.nnz(); ++n) {
            REQUIRE(c.oc_of(n - 1) <= c.oc_of(n));
            if (c.oc_of(n - 1) == c.oc_of(n)) REQUIRE(c.ic_of(n - 1) <= c.ic_of(n));
        }
    }
}

TEST_CASE("coo validation rejects corrupt entries") {
    const ConvDims d{3, 2, 2, 4};
    CHECK_THROWS_AS(SparseKernelCOO(d, {{FixedPoint16{0}, 0, 0}}), CorruptionError);
    CHECK_THROWS_AS(SparseKernelCOO(d, {{FixedPoint16{1}, 4, 0}}), CorruptionError);
    CHECK_THROWS_AS(SparseKernelCOO(d, {{FixedPoint16{1}, 0, 3}}), CorruptionError);
    CHECK_THROWS_AS(SparseKernelCOO(d, {{FixedPoint16{1}, 1, 0}, {FixedPoint16{1}, 0, 0}}), CorruptionError);
    CHECK_THROWS_AS(SparseKernelCOO(d, {{FixedPoint16{1}, 1, 0}, {FixedPoint16{2}, 1, 0}}), CorruptionError);
    CHECK_THROWS_AS(coo_encode(d, std::vector<FixedPoint16>(5)), DimensionError);
}

TEST_CASE("index widths and break-even densities of the three conv layers") {
    const ConvDims l1{11, 2, 16, 128}, l2{11, 16, 32, 64}, l3{5, 32, 64, 32};
    CHECK(derive_widths(l1).ri_bits == 5);
    CHECK(derive_widths(l1).ci_bits == 4);
    CHECK(derive_widths(l2).ri_bits == 9);
    CHECK(derive_widths(l2).ci_bits == 4);
    CHECK(derive_widths(l3).ri_bits == 11);
    CHECK(derive_widths(l3).ci_bits == 3);
    CHECK(break_even_density(16, 5, 4) == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(break_even_density(16, 9, 4) == doctest::Approx(16.0 / 29.0));
    CHECK(break_even_density(16, 11, 3) == doctest::Approx(16.0 / 30.0));
    CHECK_THROWS_AS(break_even_density(16, 0, 4), ConfigError);
    CHECK(index_bits(1) == 1);
    CHECK(index_bits(2) == 1);
    CHECK(index_bits(3) == 2);
    CHECK(index_bits(1024) == 10);
    CHECK(index_bits(1025) == 11);
}

TEST_CASE("storage bits") {
    const ConvDims l2{11, 16, 32, 64};
    const StorageWidths w = derive_widths(l2);
    CHECK(dense_storage_bits(l2) == 90112);
    CHECK(coo_bits_per_unit_density(l2, w) == 163328);
    CHECK(coo_storage_bits(SparseKernelCOO(l2, {}), w) == 0);

    const ConvDims l1{11, 2, 16, 128};
    DenseKernel k(l1);
    for (auto& x : k.weights) x.raw = 1;
    const SparseKernelCOO full = coo_encode(k);
    CHECK(coo_storage_bits(full, derive_widths(l1)) == 8800);
    CHECK(dense_storage_bits(l1) == 5632);
    CHECK_THROWS_AS(coo_storage_bits(full, StorageWidths{16, 4, 4}), ConfigError);
}

TEST_CASE("fully dense COO never beats dense storage when break-even is below one") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const ConvDims d{1 + rng.below(11), 1 + rng.below(64), 1 + rng.below(64), 8};
        const StorageWidths w = derive_widths(d);
        REQUIRE(break_even_density(w.d_bits, w.ri_bits, w.ci_bits) < 1.0);
        CHECK(coo_bits_per_unit_density(d, w) >= dense_storage_bits(d));
    }
}
