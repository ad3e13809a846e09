#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "vib2ecg/common.hpp"

namespace vib2ecg::binio {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts need byte swaps");

template <typename T>
void write_pod(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw FormatError("unexpected end of file");
    return v;
}

inline void write_bytes(std::ostream& os, const void* p, std::size_t n) {
    os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void read_bytes(std::istream& is, void* p, std::size_t n) {
    is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!is) throw FormatError("unexpected end of file");
}

inline void write_magic(std::ostream& os, const char magic[4]) { write_bytes(os, magic, 4); }

inline void expect_magic(std::istream& is, const char magic[4], const std::string& what) {
    char got[4];
    read_bytes(is, got, 4);
    if (std::memcmp(got, magic, 4) != 0) throw FormatError(what + ": bad magic");
}

inline void write_string(std::ostream& os, const std::string& s) {
    if (s.size() > 0xFFFF) throw FormatError("string too long for format");
    write_pod<std::uint16_t>(os, static_cast<std::uint16_t>(s.size()));
    write_bytes(os, s.data(), s.size());
}

inline std::string read_string(std::istream& is) {
    const auto n = read_pod<std::uint16_t>(is);
    std::string s(n, '\0');
    if (n > 0) read_bytes(is, s.data(), n);
    return s;
}

inline void write_f32s(std::ostream& os, const std::vector<float>& v) {
    write_bytes(os, v.data(), v.size() * sizeof(float));
}

inline void read_f32s(std::istream& is, std::vector<float>& v, std::size_t count) {
    v.resize(count);
    if (count > 0) read_bytes(is, v.data(), count * sizeof(float));
}

}  // namespace vib2ecg::binio
