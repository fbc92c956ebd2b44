#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace acd {

// Little-endian binary helpers for checkpoint and dataset containers.
// All target platforms here are little-endian; values are memcpy'd as-is.

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("unexpected end of stream");
    return v;
}

inline void write_string(std::ostream& out, const std::string& s) {
    write_pod<uint64_t>(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in) {
    const auto n = read_pod<uint64_t>(in);
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    if (!in) throw std::runtime_error("unexpected end of stream");
    return s;
}

}  // namespace acd
