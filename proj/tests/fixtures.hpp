#ifndef SAOCDS_TESTS_FIXTURES_HPP
#define SAOCDS_TESTS_FIXTURES_HPP

#include "saocds/spike_tensor.hpp"

namespace fixture {

// Input of the small conv example: each nonzero weight's enable map covers
// exactly two active pixels, the four sliding windows hold 4, 3, 3, 2 ones.
inline saocds::SpikeTensor small_conv_input() {
    saocds::SpikeTensor x(1, 2, 6);
    const int ic0[6] = {1, 0, 1, 0, 1, 1};
    const int ic1[6] = {0, 1, 1, 0, 0, 0};
    for (std::size_t i = 0; i < 6; ++i) {
        x.set(0, 0, i, ic0[i] != 0);
        x.set(0, 1, i, ic1[i] != 0);
    }
    return x;
}

} // namespace fixture

#endif
