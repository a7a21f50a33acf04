#ifndef PERMPENTA_UTIL_HPP
#define PERMPENTA_UTIL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace permpenta {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Raised when a configured resource cap (oracle domain, dense degree,
/// exponent width) would be exceeded.
class limits_error : public std::runtime_error {
 public:
  explicit limits_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a residue triple has no row in the closed-form tables.
class not_listed_error : public std::invalid_argument {
 public:
  explicit not_listed_error(const std::string& what)
      : std::invalid_argument(what) {}
};

std::string u128_to_string(u128 v);
u128 u128_from_string(const std::string& s);

constexpr u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// a + b, throwing limits_error on 128-bit overflow.
inline u128 checked_add_u128(u128 a, u128 b) {
  u128 r = a + b;
  if (r < a) throw limits_error("exponent overflow beyond 128 bits");
  return r;
}

/// a * b, throwing limits_error on 128-bit overflow.
inline u128 checked_mul_u128(u128 a, u128 b) {
  if (a != 0 && b > static_cast<u128>(-1) / a)
    throw limits_error("exponent overflow beyond 128 bits");
  return a * b;
}

/// p^e, throwing limits_error on 128-bit overflow.
u128 checked_pow_u128(u64 base, u64 exp);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(u64 n);

}  // namespace permpenta

#endif  // PERMPENTA_UTIL_HPP
