#include "saocds/io/model_file.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "saocds/error.hpp"

namespace saocds::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kFormatName = "saocds-model";

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw ParseError((path.empty() ? std::string("/") : path) + ": " + what);
}

// Object view that remembers which keys were read so the rest can be
// reported as unknown.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) schema_error(path_, "expected an object");
    }

    const json& req(const std::string& key) {
        const json* v = opt(key);
        if (!v) schema_error(path_, "missing field '" + key + "'");
        return *v;
    }

    const json* opt(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string at(const std::string& key) const { return path_ + "/" + key; }

    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) schema_error(at(it.key()), "unknown field");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::uint64_t get_uint(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) schema_error(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::size_t get_positive(const json& v, const std::string& path) {
    const std::uint64_t x = get_uint(v, path);
    if (x == 0) schema_error(path, "must be positive");
    return static_cast<std::size_t>(x);
}

std::int64_t get_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) schema_error(path, "expected an integer");
    return v.get<std::int64_t>();
}

double get_double(const json& v, const std::string& path) {
    if (!v.is_number()) schema_error(path, "expected a number");
    return v.get<double>();
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) schema_error(path, "expected a string");
    return v.get<std::string>();
}

const json& get_array(const json& v, const std::string& path, std::size_t expect_len = SIZE_MAX) {
    if (!v.is_array()) schema_error(path, "expected an array");
    if (expect_len != SIZE_MAX && v.size() != expect_len)
        schema_error(path, "expected " + std::to_string(expect_len) + " elements, got " + std::to_string(v.size()));
    return v;
}

FixedPoint16 get_raw16(const json& v, const std::string& path) {
    const std::int64_t x = get_int(v, path);
    if (x < INT16_MIN || x > INT16_MAX) schema_error(path, "raw value " + std::to_string(x) + " exceeds 16 bits");
    return FixedPoint16{static_cast<std::int16_t>(x)};
}

FixedPoint16 get_scaled(const json& v, const std::string& path, bool decimal, int frac_bits) {
    if (!decimal) return get_raw16(v, path);
    const double x = get_double(v, path);
    if (!std::isfinite(x)) schema_error(path, "not finite");
    return quantize(x, frac_bits);
}

std::vector<FixedPoint16> get_values(const json& v, const std::string& path, std::size_t n, bool decimal,
                                     int frac_bits) {
    get_array(v, path, n);
    std::vector<FixedPoint16> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = get_scaled(v[i], path + "/" + std::to_string(i), decimal, frac_bits);
    return out;
}

LayerNeuronParams parse_neuron(const json& j, const std::string& path, std::size_t neurons, int frac_bits) {
    Fields f(j, path);
    bool decimal = false;
    if (const json* s = f.opt("scale")) {
        const std::string scale = get_string(*s, f.at("scale"));
        if (scale == "decimal") decimal = true;
        else if (scale != "raw") schema_error(f.at("scale"), "expected \"raw\" or \"decimal\"");
    }
    LayerNeuronParams p;
    p.defaults.alpha = get_scaled(f.req("alpha"), f.at("alpha"), decimal, frac_bits);
    p.defaults.theta = get_scaled(f.req("theta"), f.at("theta"), decimal, frac_bits);
    p.defaults.u_th0 = get_scaled(f.req("u_th0"), f.at("u_th0"), decimal, frac_bits);
    if (const json* per = f.opt("per_neuron")) {
        Fields g(*per, f.at("per_neuron"));
        if (const json* a = g.opt("alpha")) p.alpha = get_values(*a, g.at("alpha"), neurons, decimal, frac_bits);
        if (const json* a = g.opt("theta")) p.theta = get_values(*a, g.at("theta"), neurons, decimal, frac_bits);
        if (const json* a = g.opt("u_th0")) p.u_th0 = get_values(*a, g.at("u_th0"), neurons, decimal, frac_bits);
        g.done();
    }
    f.done();
    try {
        p.validate(neurons, frac_bits);
    } catch (const Error& e) {
        schema_error(path, e.what());
    }
    return p;
}

// Dense weights as `rows` rows of `cols` values each.
std::vector<FixedPoint16> parse_weights(const json& j, const std::string& path, std::size_t rows, std::size_t cols,
                                        std::size_t fan_in, int frac_bits, const ConvDims* conv) {
    Fields f(j, path);
    const std::string enc = get_string(f.req("encoding"), f.at("encoding"));
    std::vector<FixedPoint16> w;

    if (enc == "dense_raw" || enc == "dense_decimal") {
        const bool decimal = enc == "dense_decimal";
        const json& rs = get_array(f.req("values"), f.at("values"), rows);
        w.reserve(rows * cols);
        for (std::size_t r = 0; r < rows; ++r) {
            auto row = get_values(rs[r], f.at("values") + "/" + std::to_string(r), cols, decimal, frac_bits);
            w.insert(w.end(), row.begin(), row.end());
        }
    } else if (enc == "coo") {
        if (!conv) schema_error(f.at("encoding"), "coo encoding is only defined for conv layers");
        const json& es = get_array(f.req("entries"), f.at("entries"));
        std::vector<CooEntry> entries;
        entries.reserve(es.size());
        for (std::size_t n = 0; n < es.size(); ++n) {
            const std::string p = f.at("entries") + "/" + std::to_string(n);
            const json& e = get_array(es[n], p, 3);
            CooEntry c;
            c.d = get_raw16(e[0], p + "/0");
            const std::uint64_t ri = get_uint(e[1], p + "/1");
            const std::uint64_t ci = get_uint(e[2], p + "/2");
            if (ri > UINT32_MAX || ci > UINT32_MAX) schema_error(p, "index out of range");
            c.ri = static_cast<std::uint32_t>(ri);
            c.ci = static_cast<std::uint32_t>(ci);
            entries.push_back(c);
        }
        try {
            w = coo_decode(SparseKernelCOO(*conv, std::move(entries))).weights;
        } catch (const Error& e) {
            schema_error(f.at("entries"), e.what());
        }
    } else if (enc == "random") {
        const std::uint64_t seed = get_uint(f.req("seed"), f.at("seed"));
        const double gain = get_double(f.req("gain"), f.at("gain"));
        if (!(gain > 0.0) || !std::isfinite(gain)) schema_error(f.at("gain"), "must be positive");
        w = random_weights(seed, rows * cols, fan_in, gain, frac_bits);
    } else {
        schema_error(f.at("encoding"), "unknown weight encoding '" + enc + "'");
    }
    f.done();
    return w;
}

std::optional<double> parse_density(Fields& f) {
    const json* v = f.opt("target_density");
    if (!v) return std::nullopt;
    const double d = get_double(*v, f.at("target_density"));
    if (!(d > 0.0 && d <= 1.0)) schema_error(f.at("target_density"), "must be in (0, 1]");
    return d;
}

LayerSpec parse_layer(const json& j, const std::string& path, int frac_bits) {
    Fields f(j, path);
    LayerSpec layer;
    layer.name = get_string(f.req("name"), f.at("name"));
    const std::string kind = get_string(f.req("kind"), f.at("kind"));

    if (kind == "conv") {
        ConvDims d;
        d.kw = get_positive(f.req("kw"), f.at("kw"));
        d.ic = get_positive(f.req("ic"), f.at("ic"));
        d.oc = get_positive(f.req("oc"), f.at("oc"));
        d.oi = get_positive(f.req("oi"), f.at("oi"));
        const auto pad = static_cast<std::size_t>(get_uint(f.req("pad"), f.at("pad")));
        auto w = parse_weights(f.req("weights"), f.at("weights"), d.ic * d.oc, d.kw, d.kw * d.ic, frac_bits, &d);
        layer.body = make_conv(coo_encode(d, w), pad);
        layer.neuron = parse_neuron(f.req("neuron"), f.at("neuron"), d.oc * d.oi, frac_bits);
        layer.target_density = parse_density(f);
    } else if (kind == "maxpool") {
        layer.body = PoolLayer{get_positive(f.req("window"), f.at("window"))};
    } else if (kind == "fc") {
        const std::size_t in = get_positive(f.req("in"), f.at("in"));
        const std::size_t out = get_positive(f.req("out"), f.at("out"));
        auto w = parse_weights(f.req("weights"), f.at("weights"), out, in, in, frac_bits, nullptr);
        layer.body = FcLayer{MaskedFcWeights(out, in, std::move(w))};
        layer.neuron = parse_neuron(f.req("neuron"), f.at("neuron"), out, frac_bits);
        layer.target_density = parse_density(f);
    } else {
        schema_error(f.at("kind"), "unknown layer kind '" + kind + "'");
    }
    f.done();
    return layer;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// ---- writing ----------------------------------------------------------------

bool scalar_array(const ordered_json& j) {
    for (const auto& e : j)
        if (e.is_structured()) return false;
    return true;
}

// Objects and nested arrays one element per line, arrays of scalars inline.
void write_json(std::ostringstream& os, const ordered_json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << pad << ordered_json(it.key()).dump() << ": ";
            write_json(os, it.value(), indent + 2);
        }
        os << "\n" << close << "}";
    } else if (j.is_array() && !scalar_array(j)) {
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) os << ",\n";
            os << pad;
            write_json(os, j[i], indent + 2);
        }
        os << "\n" << close << "]";
    } else if (j.is_array()) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) os << (i ? ", " : "") << j[i].dump();
        os << "]";
    } else {
        os << j.dump();
    }
}

ordered_json raw_array(std::span<const FixedPoint16> v) {
    ordered_json a = ordered_json::array();
    for (FixedPoint16 x : v) a.push_back(x.raw);
    return a;
}

ordered_json neuron_json(const LayerNeuronParams& p) {
    ordered_json n;
    n["alpha"] = p.defaults.alpha.raw;
    n["theta"] = p.defaults.theta.raw;
    n["u_th0"] = p.defaults.u_th0.raw;
    if (p.has_overrides()) {
        ordered_json per = ordered_json::object();
        if (!p.alpha.empty()) per["alpha"] = raw_array(p.alpha);
        if (!p.theta.empty()) per["theta"] = raw_array(p.theta);
        if (!p.u_th0.empty()) per["u_th0"] = raw_array(p.u_th0);
        n["per_neuron"] = per;
    }
    return n;
}

ordered_json layer_json(const LayerSpec& l) {
    ordered_json j;
    j["name"] = l.name;
    switch (l.kind()) {
    case LayerKind::Conv: {
        const ConvLayer& c = l.conv();
        j["kind"] = "conv";
        j["kw"] = c.dims.kw;
        j["ic"] = c.dims.ic;
        j["oc"] = c.dims.oc;
        j["oi"] = c.dims.oi;
        j["pad"] = c.pad;
        if (l.target_density) j["target_density"] = *l.target_density;
        j["neuron"] = neuron_json(l.neuron);
        ordered_json entries = ordered_json::array();
        for (const CooEntry& e : c.kernel.entries()) entries.push_back(ordered_json::array({e.d.raw, e.ri, e.ci}));
        j["weights"] = ordered_json{{"encoding", "coo"}, {"entries", entries}};
        break;
    }
    case LayerKind::MaxPool:
        j["kind"] = "maxpool";
        j["window"] = l.pool().window;
        break;
    case LayerKind::Fc: {
        const MaskedFcWeights& w = l.fc().weights;
        j["kind"] = "fc";
        j["in"] = w.in();
        j["out"] = w.out();
        if (l.target_density) j["target_density"] = *l.target_density;
        j["neuron"] = neuron_json(l.neuron);
        ordered_json rows = ordered_json::array();
        for (std::size_t o = 0; o < w.out(); ++o) rows.push_back(raw_array(w.weight_row(o)));
        j["weights"] = ordered_json{{"encoding", "dense_raw"}, {"values", rows}};
        break;
    }
    }
    return j;
}

} // namespace

NetworkSpec parse_model(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        throw ParseError("model syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                             ": " + e.what(),
                         line, col);
    }

    Fields f(root, "");
    const std::string format = get_string(f.req("format"), f.at("format"));
    if (format != kFormatName) schema_error(f.at("format"), "expected \"" + std::string(kFormatName) + "\"");
    const std::int64_t version = get_int(f.req("version"), f.at("version"));
    if (version != kModelFormatVersion)
        schema_error(f.at("version"), "unsupported model version " + std::to_string(version) + " (this build reads " +
                                          std::to_string(kModelFormatVersion) + ")");

    NetworkSpec net;
    net.frac_bits = static_cast<int>(get_int(f.req("frac_bits"), f.at("frac_bits")));
    if (net.frac_bits < 0 || net.frac_bits > 15) schema_error(f.at("frac_bits"), "must be in [0, 15]");
    if (const json* v = f.opt("d_bits")) net.d_bits = static_cast<int>(get_int(*v, f.at("d_bits")));
    if (const json* v = f.opt("readout_potentials")) {
        if (!v->is_boolean()) schema_error(f.at("readout_potentials"), "expected true or false");
        net.readout_potentials = v->get<bool>();
    }
    {
        Fields in(f.req("input"), f.at("input"));
        net.input.channels = get_positive(in.req("channels"), in.at("channels"));
        net.input.width = get_positive(in.req("width"), in.at("width"));
        in.done();
    }
    const json& layers = get_array(f.req("layers"), f.at("layers"));
    for (std::size_t i = 0; i < layers.size(); ++i)
        net.layers.push_back(parse_layer(layers[i], f.at("layers") + "/" + std::to_string(i), net.frac_bits));
    f.done();

    try {
        net.validate();
    } catch (const Error& e) {
        throw ParseError(std::string("model is inconsistent: ") + e.what());
    }
    return net;
}

std::string serialize_model(const NetworkSpec& net) {
    ordered_json j;
    j["format"] = kFormatName;
    j["version"] = kModelFormatVersion;
    j["frac_bits"] = net.frac_bits;
    j["d_bits"] = net.d_bits;
    j["readout_potentials"] = net.readout_potentials;
    j["input"] = ordered_json{{"channels", net.input.channels}, {"width", net.input.width}};
    ordered_json layers = ordered_json::array();
    for (const LayerSpec& l : net.layers) layers.push_back(layer_json(l));
    j["layers"] = layers;
    std::ostringstream os;
    write_json(os, j, 0);
    os << "\n";
    return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw ConfigError("write to '" + path.string() + "' failed");
}

NetworkSpec load_model(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_model(text);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line, e.column);
    }
}

void save_model(const std::filesystem::path& path, const NetworkSpec& net) {
    write_text_file(path, serialize_model(net));
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t model_hash(const NetworkSpec& net) { return fnv1a(serialize_model(net)); }

} // namespace saocds::io
