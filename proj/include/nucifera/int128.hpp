#pragma once

#include <cstdint>
#include <string>
#include <string_view>

static_assert(sizeof(__int128) == 16, "128-bit integers required");

namespace nucifera {

using i128 = __int128;
using u128 = unsigned __int128;

std::string to_string(i128 v);
i128 parse_i128(std::string_view s);   // decimal, optional leading '-'

inline u128 abs_u128(i128 v) { return v < 0 ? -u128(v) : u128(v); }

i128 gcd_i128(i128 a, i128 b);   // nonnegative result

}  // namespace nucifera
