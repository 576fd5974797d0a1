#ifndef SAOCDS_IO_REPORT_HPP
#define SAOCDS_IO_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "saocds/metrics.hpp"
#include "saocds/network.hpp"
#include "saocds/runner.hpp"

namespace saocds::io {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

/// Enough to regenerate a reported number: which model, which input, which
/// knobs.
struct Provenance {
    std::string command;
    std::uint64_t model_hash = 0;
    std::string model_path;
    std::string input_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, std::string>> config;
};

std::string hex64(std::uint64_t v);

std::string run_report_json(const NetworkSpec& net, const RunResult& result, const std::string& engine,
                            const Provenance& prov);

std::string compare_report_json(const NetworkSpec& net, const RunResult& streaming, const RunResult& sliding,
                                const std::optional<SpikeMismatch>& mismatch, const Provenance& prov);

std::string analysis_report_json(const NetworkAnalysis& analysis, const Provenance& prov);

} // namespace saocds::io

#endif
