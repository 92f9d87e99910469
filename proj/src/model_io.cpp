#include "perconv/model_io.hpp"

#include "perconv/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace perconv {
namespace {

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; byte swapping is not implemented");

template <class T>
void write_le(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T read_le(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw ModelFormatError("truncated model file");
    return v;
}

} // namespace

void write_model(const Network<float>& net, std::ostream& out) {
    out.write(kModelMagic, 4);
    write_le<std::uint16_t>(out, kModelVersion);
    std::string cfg = config_to_json(net.cfg);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.size()));
    out.write(cfg.data(), static_cast<std::streamsize>(cfg.size()));
    for (const auto& e : net.entries) {
        write_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.value.size() * sizeof(float)));
        out.write(reinterpret_cast<const char*>(e.value.ptr()),
                  static_cast<std::streamsize>(e.value.size() * sizeof(float)));
    }
}

Network<float> read_model(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kModelMagic, 4) != 0)
        throw ModelFormatError("not a model file (bad magic)");
    std::uint16_t version = read_le<std::uint16_t>(in);
    if (version != kModelVersion)
        throw ModelFormatError("unsupported model format version " + std::to_string(version));
    std::uint32_t cfg_len = read_le<std::uint32_t>(in);
    std::string cfg_text(cfg_len, '\0');
    in.read(cfg_text.data(), cfg_len);
    if (!in) throw ModelFormatError("truncated model file");

    NetworkConfig cfg = config_from_json(cfg_text);
    Network<float> net = Network<float>::build(cfg);
    for (auto& e : net.entries) {
        std::uint32_t bytes = read_le<std::uint32_t>(in);
        if (bytes != e.value.size() * sizeof(float))
            throw ModelFormatError("parameter size mismatch for " + e.name);
        in.read(reinterpret_cast<char*>(e.value.ptr()), bytes);
        if (!in) throw ModelFormatError("truncated model file");
    }
    return net;
}

void save_model(const Network<float>& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    write_model(net, out);
    if (!out) throw DataError("failed writing model: " + path);
}

Network<float> load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    return read_model(in);
}

} // namespace perconv
