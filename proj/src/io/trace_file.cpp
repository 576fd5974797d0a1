#include "saocds/io/trace_file.hpp"

#include <fstream>
#include <iterator>
#include <string>

#include "saocds/error.hpp"

namespace saocds::io {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'K', 'T'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[at + static_cast<std::size_t>(i)]} << (8 * i);
    return v;
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > UINT32_MAX) throw DimensionError(std::string("trace ") + what + " does not fit in 32 bits");
    return static_cast<std::uint32_t>(v);
}

} // namespace

std::size_t trace_payload_bytes(std::size_t t, std::size_t c, std::size_t w) { return (t * c * w + 7) / 8; }

std::vector<std::uint8_t> encode_trace(const SpikeTensor& s) {
    std::vector<std::uint8_t> out(kMagic, kMagic + 4);
    put_u32(out, kTraceVersion);
    put_u32(out, checked_u32(s.timesteps(), "length"));
    put_u32(out, checked_u32(s.channels(), "channel count"));
    put_u32(out, checked_u32(s.width(), "width"));
    const auto bits = s.bits();
    std::vector<std::uint8_t> payload(trace_payload_bytes(s.timesteps(), s.channels(), s.width()), 0);
    for (std::size_t k = 0; k < bits.size(); ++k)
        if (bits[k]) payload[k / 8] |= static_cast<std::uint8_t>(1u << (k % 8));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

SpikeTensor decode_trace(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kTraceHeaderBytes) throw CorruptionError("trace is shorter than its header");
    if (!std::equal(kMagic, kMagic + 4, bytes.begin())) throw CorruptionError("not a spike trace (bad magic)");
    const std::uint32_t version = get_u32(bytes, 4);
    if (version != kTraceVersion)
        throw CorruptionError("unsupported trace version " + std::to_string(version));
    const std::size_t t = get_u32(bytes, 8), c = get_u32(bytes, 12), w = get_u32(bytes, 16);
    if (t > 0 && (c == 0 || w == 0)) throw CorruptionError("trace has an empty frame shape");
    const std::size_t expect = trace_payload_bytes(t, c, w);
    if (bytes.size() - kTraceHeaderBytes != expect)
        throw CorruptionError("trace payload is " + std::to_string(bytes.size() - kTraceHeaderBytes) +
                              " bytes, header implies " + std::to_string(expect));
    const auto payload = bytes.subspan(kTraceHeaderBytes);
    const std::size_t n = t * c * w;
    // padding bits in the last byte must be clear, otherwise the file was
    // written with a different shape
    if (n % 8 && (payload.back() >> (n % 8)))
        throw CorruptionError("trace has set bits past the end of the last frame");

    SpikeTensor s(t, c, w);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t x = k % w, ch = (k / w) % c, ts = k / (w * c);
        if ((payload[k / 8] >> (k % 8)) & 1u) s.set(ts, ch, x, true);
    }
    return s;
}

SpikeTensor load_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open trace '" + path.string() + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_trace(bytes);
    } catch (const CorruptionError& e) {
        throw CorruptionError(path.string() + ": " + e.what());
    }
}

void save_trace(const std::filesystem::path& path, const SpikeTensor& spikes) {
    const std::vector<std::uint8_t> bytes = encode_trace(spikes);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError("write to '" + path.string() + "' failed");
}

} // namespace saocds::io
