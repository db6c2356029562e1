#include "fagan/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>

#include "fagan/errors.hpp"

namespace fagan::nets {

namespace {

constexpr uint32_t kVersion = 1;

void put_u32(std::ofstream& out, uint32_t v) {
    const uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                          static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ofstream& out, double v) {
    uint64_t u;
    std::memcpy(&u, &v, sizeof(u));
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(u >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

uint32_t get_u32(std::ifstream& in) {
    uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw FormatError("checkpoint: truncated file");
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

double get_f64(std::ifstream& in) {
    uint8_t b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw FormatError("checkpoint: truncated file");
    uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, sizeof(v));
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::vector<NamedParam>& params) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("checkpoint: cannot write " + path);
    out.write("FAGN", 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<uint32_t>(params.size()));
    for (const NamedParam& p : params) {
        put_u32(out, static_cast<uint32_t>(p.name.size()));
        out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
        put_u32(out, static_cast<uint32_t>(p.tensor->rank));
        for (int d = 0; d < p.tensor->rank; ++d) {
            put_u32(out, static_cast<uint32_t>(p.tensor->dims[d]));
        }
        for (double v : p.tensor->data) put_f64(out, v);
    }
    if (!out) throw FormatError("checkpoint: short write on " + path);
}

void load_checkpoint(const std::string& path, const std::vector<NamedParam>& params) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("checkpoint: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FAGN", 4) != 0) {
        throw FormatError("checkpoint: bad magic in " + path);
    }
    const uint32_t version = get_u32(in);
    if (version != kVersion) throw FormatError("checkpoint: unsupported version");
    const uint32_t count = get_u32(in);
    if (count != params.size()) throw FormatError("checkpoint: parameter count mismatch");

    std::map<std::string, Tensor*> by_name;
    for (const NamedParam& p : params) by_name[p.name] = p.tensor;

    for (uint32_t i = 0; i < count; ++i) {
        const uint32_t name_len = get_u32(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        if (!in) throw FormatError("checkpoint: truncated name");
        auto it = by_name.find(name);
        if (it == by_name.end()) throw FormatError("checkpoint: unknown parameter " + name);
        Tensor* t = it->second;
        const uint32_t rank = get_u32(in);
        if (static_cast<int>(rank) != t->rank) {
            throw FormatError("checkpoint: rank mismatch for " + name);
        }
        for (uint32_t d = 0; d < rank; ++d) {
            if (get_u32(in) != static_cast<uint32_t>(t->dims[d])) {
                throw FormatError("checkpoint: shape mismatch for " + name);
            }
        }
        for (double& v : t->data) v = get_f64(in);
    }
}

}  // namespace fagan::nets
