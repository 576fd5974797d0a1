#ifndef SAOCDS_IO_TRACE_FILE_HPP
#define SAOCDS_IO_TRACE_FILE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "saocds/spike_tensor.hpp"

namespace saocds::io {

// Layout, all integers little-endian:
//   "SPKT"  u32 version  u32 T  u32 channels  u32 width
//   ceil(T*C*W/8) payload bytes; bit k of the flattened [t][c][x] order is
//   bit (k % 8) of byte k / 8, least significant first.
inline constexpr std::uint32_t kTraceVersion = 1;
inline constexpr std::size_t kTraceHeaderBytes = 20;

std::size_t trace_payload_bytes(std::size_t t, std::size_t c, std::size_t w);

std::vector<std::uint8_t> encode_trace(const SpikeTensor& spikes);
SpikeTensor decode_trace(std::span<const std::uint8_t> bytes);

SpikeTensor load_trace(const std::filesystem::path& path);
void save_trace(const std::filesystem::path& path, const SpikeTensor& spikes);

} // namespace saocds::io

#endif
