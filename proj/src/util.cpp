#include "permpenta/util.hpp"

#include <algorithm>

namespace permpenta {

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

u128 u128_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  u128 v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9')
      throw std::invalid_argument("invalid digit in integer literal");
    u128 next = v * 10 + static_cast<unsigned>(ch - '0');
    if (next < v) throw limits_error("integer literal exceeds 128 bits");
    v = next;
  }
  return v;
}

u128 checked_pow_u128(u64 base, u64 exp) {
  u128 r = 1;
  u128 b = base;
  while (exp != 0) {
    if (exp & 1) r = checked_mul_u128(r, b);
    exp >>= 1;
    if (exp != 0) b = checked_mul_u128(b, b);
  }
  return r;
}

namespace {

u64 mulmod_u64(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod_u64(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Sufficient witness set for every 64-bit integer.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace permpenta
