#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "tubal/errors.hpp"
#include "tubal/tensor3.hpp"

namespace tubal {

// Shortest text form of a double that still survives a 17-significant-digit
// round trip; used for every number in CSV and JSON artifacts.
inline std::string fmt17(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return std::string(buf.data());
}

// Writes a file atomically: the payload goes to a sibling temp file which
// is renamed over the target only after a successful write.
inline void atomic_write_file(const std::filesystem::path& path,
                              const std::function<void(std::ostream&)>& writer) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        try {
            writer(out);
        } catch (...) {
            out.close();
            std::filesystem::remove(tmp);
            throw;
        }
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

namespace detail {

inline void put_u64_le(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

inline std::uint64_t get_u64_le(std::istream& in) {
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline void put_f64_le(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64_le(out, bits);
}

inline double get_f64_le(std::istream& in) {
    const std::uint64_t bits = get_u64_le(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace detail

// "T3R1" container: 4-byte magic, three little-endian u64 dims, then the
// float64 payload in storage order (slice-major, row-major within a slice).
inline void write_t3r1(std::ostream& out, const Tensor3& t) {
    out.write("T3R1", 4);
    detail::put_u64_le(out, static_cast<std::uint64_t>(t.n1()));
    detail::put_u64_le(out, static_cast<std::uint64_t>(t.n2()));
    detail::put_u64_le(out, static_cast<std::uint64_t>(t.n3()));
    for (std::size_t i = 0; i < t.size(); ++i) detail::put_f64_le(out, t.data()[i]);
}

inline void save_t3r1(const std::filesystem::path& path, const Tensor3& t) {
    atomic_write_file(path, [&](std::ostream& out) { write_t3r1(out, t); });
}

inline Tensor3 read_t3r1(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "T3R1", 4) != 0)
        throw IoError("t3r1: bad magic");
    const std::uint64_t n1 = detail::get_u64_le(in);
    const std::uint64_t n2 = detail::get_u64_le(in);
    const std::uint64_t n3 = detail::get_u64_le(in);
    if (!in || n1 == 0 || n2 == 0 || n3 == 0 || n1 > (1u << 20) || n2 > (1u << 20) ||
        n3 > (1u << 20))
        throw IoError("t3r1: bad dimensions");
    Tensor3 t(static_cast<int>(n1), static_cast<int>(n2), static_cast<int>(n3));
    for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = detail::get_f64_le(in);
    if (!in) throw IoError("t3r1: truncated payload");
    in.peek();
    if (!in.eof()) throw IoError("t3r1: trailing bytes");
    return t;
}

inline Tensor3 load_t3r1(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    return read_t3r1(in);
}

}  // namespace tubal
