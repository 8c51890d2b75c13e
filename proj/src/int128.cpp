#include "nucifera/int128.hpp"

#include <stdexcept>

namespace nucifera {

std::string to_string(i128 v) {
  if (v == 0) return "0";
  u128 m = abs_u128(v);
  char buf[48];
  int pos = 48;
  while (m > 0) {
    buf[--pos] = char('0' + int(m % 10));
    m /= 10;
  }
  std::string out;
  if (v < 0) out.push_back('-');
  out.append(buf + pos, 48 - pos);
  return out;
}

i128 parse_i128(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  bool negative = false;
  size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw std::invalid_argument("sign without digits");
  constexpr u128 kMax = ~u128{0} >> 1;          // 2^127 - 1
  const u128 limit = negative ? kMax + 1 : kMax;
  u128 m = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c < '0' || c > '9') throw std::invalid_argument("bad digit in integer literal");
    unsigned d = unsigned(c - '0');
    if (m > (limit - d) / 10) throw std::invalid_argument("integer literal out of 128-bit range");
    m = m * 10 + d;
  }
  if (negative && m == kMax + 1) return i128(m);   // modular conversion yields -2^127
  return negative ? -i128(m) : i128(m);
}

i128 gcd_i128(i128 a, i128 b) {
  u128 x = abs_u128(a), y = abs_u128(b);
  while (y != 0) {
    u128 t = x % y;
    x = y;
    y = t;
  }
  return i128(x);
}

}  // namespace nucifera
