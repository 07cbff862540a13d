#include "graphct/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace graphct {

namespace {

constexpr char kMagic[4] = {'G', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

void append_bytes(std::vector<std::uint8_t>& out, const void* p, std::size_t len) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + len);
}

template <typename T>
void append_value(std::vector<std::uint8_t>& out, T v) {
    append_bytes(out, &v, sizeof v);
}

struct Reader {
    const std::vector<std::uint8_t>& buf;
    std::size_t pos = 0;

    void read_into(void* p, std::size_t len) {
        if (pos + len > buf.size()) throw std::runtime_error("checkpoint: truncated file");
        std::memcpy(p, buf.data() + pos, len);
        pos += len;
    }
    template <typename T>
    T read_value() {
        T v;
        read_into(&v, sizeof v);
        return v;
    }
};

} // namespace

std::vector<std::uint8_t> serialize_weights(const std::vector<ParamRef>& params) {
    std::vector<std::uint8_t> out;
    append_bytes(out, kMagic, sizeof kMagic);
    append_value<std::uint32_t>(out, kVersion);
    append_value<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
    for (const auto& p : params) {
        if (!p.value->all_finite())
            throw std::runtime_error("checkpoint: non-finite value in '" + p.name + "'");
        append_value<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
        append_bytes(out, p.name.data(), p.name.size());
        append_value<std::uint32_t>(out, static_cast<std::uint32_t>(p.value->rank()));
        for (int d : p.value->shape()) append_value<std::uint64_t>(out, static_cast<std::uint64_t>(d));
        append_bytes(out, p.value->data(), p.value->numel() * sizeof(double));
    }
    return out;
}

void deserialize_weights(const std::vector<std::uint8_t>& bytes,
                         const std::vector<ParamRef>& params) {
    Reader r{bytes};
    char magic[4];
    r.read_into(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("checkpoint: bad magic");
    const auto version = r.read_value<std::uint32_t>();
    if (version != kVersion)
        throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
    const auto count = r.read_value<std::uint32_t>();
    if (count != params.size())
        throw std::runtime_error("checkpoint: parameter count mismatch");
    for (const auto& p : params) {
        const auto name_len = r.read_value<std::uint32_t>();
        std::string name(name_len, '\0');
        r.read_into(name.data(), name_len);
        if (name != p.name)
            throw std::runtime_error("checkpoint: expected parameter '" + p.name + "', found '" +
                                     name + "'");
        const auto rank = r.read_value<std::uint32_t>();
        if (rank != static_cast<std::uint32_t>(p.value->rank()))
            throw std::runtime_error("checkpoint: rank mismatch for '" + name + "'");
        for (int d : p.value->shape()) {
            const auto dim = r.read_value<std::uint64_t>();
            if (dim != static_cast<std::uint64_t>(d))
                throw std::runtime_error("checkpoint: shape mismatch for '" + name + "'");
        }
        r.read_into(p.value->data(), p.value->numel() * sizeof(double));
        if (!p.value->all_finite())
            throw std::runtime_error("checkpoint: non-finite value loaded for '" + name + "'");
    }
    if (r.pos != bytes.size()) throw std::runtime_error("checkpoint: trailing bytes");
}

void save_weights(const std::string& path, const std::vector<ParamRef>& params) {
    const auto bytes = serialize_weights(params);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint: cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("checkpoint: write failed for '" + path + "'");
}

void load_weights(const std::string& path, const std::vector<ParamRef>& params) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    deserialize_weights(bytes, params);
}

} // namespace graphct
