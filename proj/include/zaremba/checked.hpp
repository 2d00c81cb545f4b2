#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zaremba {

// Exact unsigned 128-bit integers for continuant arithmetic.  Every norm in
// scope is bounded by 2^63, so 128 bits leave ample headroom for products of
// two continuants; anything past that is a hard error, never a wraparound.
using u128 = unsigned __int128;

struct overflow_error : std::overflow_error {
    explicit overflow_error(const std::string& what) : std::overflow_error(what) {}
};

inline u128 checked_add(u128 x, u128 y) {
    u128 r;
    if (__builtin_add_overflow(x, y, &r))
        throw overflow_error("u128 addition overflow");
    return r;
}

inline u128 checked_mul(u128 x, u128 y) {
    u128 r;
    if (__builtin_mul_overflow(x, y, &r))
        throw overflow_error("u128 multiplication overflow");
    return r;
}

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return s;
}

inline u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline double to_double(u128 v) {
    return static_cast<double>(v);
}

}  // namespace zaremba
