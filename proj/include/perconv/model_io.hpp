#pragma once

#include "perconv/nn.hpp"

#include <iosfwd>
#include <string>

namespace perconv {

// Model file layout: magic "RPTM"; format version (u16 LE); u32 LE length
// + UTF-8 JSON NetworkConfig; then, for each entry in build order, a
// u32 LE byte length + little-endian float32 values. Unknown versions
// are rejected on read.
inline constexpr char kModelMagic[4] = {'R', 'P', 'T', 'M'};
inline constexpr std::uint16_t kModelVersion = 1;

void save_model(const Network<float>& net, const std::string& path);
Network<float> load_model(const std::string& path);

void write_model(const Network<float>& net, std::ostream& out);
Network<float> read_model(std::istream& in);

} // namespace perconv
