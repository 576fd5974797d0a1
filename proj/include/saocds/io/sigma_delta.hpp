#ifndef SAOCDS_IO_SIGMA_DELTA_HPP
#define SAOCDS_IO_SIGMA_DELTA_HPP

#include <cstddef>
#include <filesystem>
#include <vector>

#include "saocds/spike_tensor.hpp"

namespace saocds::io {

/// Channels of real samples, e.g. the I and Q rows of one frame.
using IqFrame = std::vector<std::vector<double>>;

struct SigmaDeltaConfig {
    std::size_t osr = 8;  // bits per sample, becomes the number of timesteps
    int order = 1;        // 1 or 2
};

struct SigmaDeltaResult {
    SpikeTensor spikes;      // (T = osr, channels, samples)
    std::size_t clipped = 0; // samples outside [-1, 1], clipped before modulation
};

/// Error-feedback modulator run once per channel over the oversampled
/// sequence (each sample held for osr steps, state carried across
/// samples). Output bit +1 -> 1, -1 -> 0. Timestep t carries bit t of every
/// sample.
SigmaDeltaResult sigma_delta_encode(const IqFrame& iq, const SigmaDeltaConfig& cfg = {});

/// Scale so the largest magnitude is 1 (no-op for an all-zero frame).
IqFrame normalize_peak(IqFrame iq);

/// Text frame: one line per channel, numbers separated by spaces or commas.
/// Blank lines and lines starting with '#' are ignored.
IqFrame load_iq_text(const std::filesystem::path& path);

} // namespace saocds::io

#endif
