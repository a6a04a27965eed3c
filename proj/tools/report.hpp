#pragma once

// Text formatting shared by the command-line tool and the acceptance runner.

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace quasispec::tools {

/// Shortest form that still round-trips: 17 significant digits.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

/// 64-bit FNV-1a, used to fingerprint resolved configurations.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace quasispec::tools
