#include "saocds/io/sigma_delta.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "saocds/error.hpp"

namespace saocds::io {

SigmaDeltaResult sigma_delta_encode(const IqFrame& iq, const SigmaDeltaConfig& cfg) {
    if (cfg.osr == 0) throw ConfigError("oversampling ratio must be at least 1");
    if (cfg.order != 1 && cfg.order != 2) throw ConfigError("sigma-delta order must be 1 or 2");
    if (iq.empty()) throw DimensionError("sigma-delta input has no channels");
    const std::size_t width = iq.front().size();
    for (const auto& ch : iq)
        if (ch.size() != width) throw DimensionError("sigma-delta input channels differ in length");

    SigmaDeltaResult r;
    r.spikes = SpikeTensor(cfg.osr, iq.size(), width);
    for (std::size_t c = 0; c < iq.size(); ++c) {
        double i1 = 0.0, i2 = 0.0;  // integrator states
        for (std::size_t x = 0; x < width; ++x) {
            double u = iq[c][x];
            if (std::isnan(u)) throw ConfigError("sigma-delta input contains NaN");
            if (u < -1.0 || u > 1.0) {
                ++r.clipped;
                u = std::clamp(u, -1.0, 1.0);
            }
            for (std::size_t t = 0; t < cfg.osr; ++t) {
                double y;
                if (cfg.order == 1) {
                    const double v = u + i1;
                    y = v >= 0.0 ? 1.0 : -1.0;
                    i1 = v - y;
                } else {
                    y = i2 >= 0.0 ? 1.0 : -1.0;
                    i1 += u - y;
                    i2 += i1 - y;
                }
                r.spikes.set(t, c, x, y > 0.0);
            }
        }
    }
    return r;
}

IqFrame normalize_peak(IqFrame iq) {
    double peak = 0.0;
    for (const auto& ch : iq)
        for (double v : ch) peak = std::max(peak, std::fabs(v));
    if (peak > 0.0)
        for (auto& ch : iq)
            for (double& v : ch) v /= peak;
    return iq;
}

IqFrame load_iq_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open IQ file '" + path.string() + "'");
    IqFrame frame;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::vector<double> ch;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == ',' || line[pos] == '\r'))
                ++pos;
            if (pos >= line.size()) break;
            double v = 0.0;
            const auto [end, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), v);
            if (ec != std::errc{})
                throw ParseError(path.string() + ": bad number at line " + std::to_string(lineno) + ", column " +
                                     std::to_string(pos + 1),
                                 lineno, pos + 1);
            ch.push_back(v);
            pos = static_cast<std::size_t>(end - line.data());
        }
        frame.push_back(std::move(ch));
    }
    if (frame.empty()) throw ParseError(path.string() + ": no sample rows");
    return frame;
}

} // namespace saocds::io
