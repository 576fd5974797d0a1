#ifndef SAOCDS_IO_MODEL_FILE_HPP
#define SAOCDS_IO_MODEL_FILE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "saocds/network.hpp"

namespace saocds::io {

inline constexpr int kModelFormatVersion = 1;

/// JSON model text -> validated network. Syntax errors carry line/column,
/// schema errors carry the JSON pointer of the offending value.
NetworkSpec parse_model(std::string_view text);

/// Canonical text: raw fixed-point integers, COO for conv kernels, dense
/// rows for FC weights, fixed key order. parse_model(serialize_model(n)) == n.
std::string serialize_model(const NetworkSpec& net);

NetworkSpec load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const NetworkSpec& net);

/// 64-bit FNV-1a over the canonical text; identifies a model in reports.
std::uint64_t model_hash(const NetworkSpec& net);
std::uint64_t fnv1a(std::string_view bytes);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace saocds::io

#endif
