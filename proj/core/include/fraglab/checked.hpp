#pragma once

#include "fraglab/error.hpp"

#include <cstdint>

namespace fraglab {

using Int = std::int64_t;

inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
    return r;
}

inline Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
    return r;
}

// mathematical residue in [0, d)
inline Int mod_floor(Int a, Int d) {
    Int r = a % d;
    return r < 0 ? r + d : r;
}

}  // namespace fraglab
