#include "permpenta/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace permpenta {

PrimeModulus PrimeModulus::checked(u64 p) {
  if (!is_prime_u64(p)) throw std::invalid_argument("modulus is not prime");
  return PrimeModulus{p};
}

void FpPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

namespace {

// Dense polynomial arithmetic over F_p used for modulus construction and
// Frobenius tables. Not performance sensitive: u128 accumulators throughout.

FpPoly fp_mod(FpPoly a, const FpPoly& m, u64 p) {
  const std::int64_t dm = m.degree();
  if (dm < 0) throw std::invalid_argument("division by zero polynomial");
  // m is monic in every call site.
  while (a.degree() >= dm) {
    const std::int64_t shift = a.degree() - dm;
    const u64 lead = a.c.back();
    for (std::int64_t j = 0; j <= dm; ++j) {
      u128 sub = static_cast<u128>(lead) * m.c[static_cast<size_t>(j)] % p;
      u64 cur = a.c[static_cast<size_t>(j + shift)];
      a.c[static_cast<size_t>(j + shift)] =
          static_cast<std::uint32_t>((cur + p - static_cast<u64>(sub)) % p);
    }
    a.trim();
  }
  return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, u64 p) {
  if (a.is_zero() || b.is_zero()) return FpPoly{};
  std::vector<u128> col(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      col[i + j] += static_cast<u128>(a.c[i]) * b.c[j];
  }
  FpPoly r;
  r.c.resize(col.size());
  for (size_t i = 0; i < col.size(); ++i)
    r.c[i] = static_cast<std::uint32_t>(col[i] % p);
  r.trim();
  return fp_mod(std::move(r), m, p);
}

FpPoly fp_powmod(FpPoly base, u64 e, const FpPoly& m, u64 p) {
  FpPoly r;
  r.c = {1};
  base = fp_mod(std::move(base), m, p);
  while (e != 0) {
    if (e & 1) r = fp_mulmod(r, base, m, p);
    e >>= 1;
    if (e != 0) base = fp_mulmod(base, base, m, p);
  }
  return r;
}

FpPoly fp_sub(FpPoly a, const FpPoly& b, u64 p) {
  if (a.c.size() < b.c.size()) a.c.resize(b.c.size(), 0);
  for (size_t i = 0; i < b.c.size(); ++i)
    a.c[i] = static_cast<std::uint32_t>((a.c[i] + p - b.c[i]) % p);
  a.trim();
  return a;
}

FpPoly fp_make_monic(FpPoly a, u64 p) {
  if (a.is_zero()) return a;
  const u64 lead = a.c.back();
  if (lead == 1) return a;
  // lead^(p-2) by Fermat.
  u64 inv = 1, b = lead, e = p - 2;
  while (e != 0) {
    if (e & 1) inv = static_cast<u64>(static_cast<u128>(inv) * b % p);
    b = static_cast<u64>(static_cast<u128>(b) * b % p);
    e >>= 1;
  }
  for (auto& d : a.c)
    d = static_cast<std::uint32_t>(static_cast<u128>(d) * inv % p);
  return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, u64 p) {
  a = fp_make_monic(std::move(a), p);
  b = fp_make_monic(std::move(b), p);
  while (!b.is_zero()) {
    FpPoly r = fp_mod(std::move(a), b, p);
    a = std::move(b);
    b = fp_make_monic(std::move(r), p);
  }
  return a;
}

FpPoly fp_x() {
  FpPoly x;
  x.c = {0, 1};
  return x;
}

}  // namespace

bool fp_poly_is_irreducible(const FpPoly& m, u64 p) {
  const std::int64_t n = m.degree();
  if (n < 1) return false;
  if (m.c.back() != 1) throw std::invalid_argument("modulus must be monic");
  if (n == 1) return true;
  // Rabin: X^(p^d) != X mod m for proper divisors d of n (via coprime gcd),
  // and X^(p^n) == X mod m.
  FpPoly h = fp_mod(fp_x(), m, p);
  for (std::int64_t d = 1; d <= n; ++d) {
    h = fp_powmod(std::move(h), p, m, p);
    if (d < n) {
      if (n % d != 0) continue;
      FpPoly g = fp_gcd(fp_sub(h, fp_mod(fp_x(), m, p), p), m, p);
      if (g.degree() != 0) return false;
    } else {
      if (!(fp_sub(h, fp_mod(fp_x(), m, p), p).is_zero())) return false;
    }
  }
  return true;
}

FpPoly find_irreducible(u64 p, unsigned n) {
  PrimeModulus::checked(p);
  if (n == 0) throw std::invalid_argument("degree must be positive");
  u128 count = 1;
  for (unsigned i = 0; i < n; ++i) count = checked_mul_u128(count, p);
  for (u128 j = 0; j < count; ++j) {
    // Tuple (c_0, ..., c_{n-1}) with c_0 the most significant position, so
    // ascending j enumerates candidates in the canonical lexicographic order.
    FpPoly cand;
    cand.c.resize(n + 1);
    cand.c[n] = 1;
    u128 t = j;
    for (unsigned i = 0; i < n; ++i) {
      cand.c[n - 1 - i] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    if (fp_poly_is_irreducible(cand, p)) return cand;
  }
  throw std::logic_error("no irreducible polynomial found");
}

ExtFieldCtx::ExtFieldCtx(u64 p, unsigned k)
    : ExtFieldCtx(p, k, find_irreducible(p, 2 * k)) {}

ExtFieldCtx::ExtFieldCtx(u64 p, unsigned k, FpPoly modulus)
    : p_(PrimeModulus::checked(p).p), k_(k), n_(2 * k),
      modulus_(std::move(modulus)) {
  if (k_ == 0) throw std::invalid_argument("k must be positive");
  if (n_ > kMaxExtDegree)
    throw limits_error("extension degree exceeds the structural limit");
  const u128 q2_wide = checked_pow_u128(p_, n_);
  if (q2_wide > (static_cast<u128>(1) << 63))
    throw limits_error("field size q^2 exceeds 2^63");
  q2_ = static_cast<u64>(q2_wide);
  q_ = static_cast<u64>(checked_pow_u128(p_, k_));
  if (modulus_.degree() != static_cast<std::int64_t>(n_) ||
      modulus_.c.back() != 1)
    throw std::invalid_argument("modulus must be monic of degree 2k");
  if (!fp_poly_is_irreducible(modulus_, p_))
    throw std::invalid_argument("modulus is reducible");
  init();
}

void ExtFieldCtx::init() {
  big_digits_ = p_ > (1u << 16);
  p_pow_.resize(n_ + 1);
  p_pow_[0] = 1;
  for (unsigned i = 1; i <= n_; ++i) p_pow_[i] = p_pow_[i - 1] * p_;

  auto to_elem = [&](const FpPoly& f) {
    ExtElem e;
    for (size_t i = 0; i < f.c.size(); ++i) e.c[i] = f.c[i];
    return e;
  };
  const FpPoly xp = fp_powmod(fp_x(), p_, modulus_, p_);
  const FpPoly xq = fp_powmod(fp_x(), q_, modulus_, p_);
  frob1_images_.resize(n_);
  frobk_images_.resize(n_);
  FpPoly acc1, acck;
  acc1.c = {1};
  acck.c = {1};
  for (unsigned i = 0; i < n_; ++i) {
    frob1_images_[i] = to_elem(acc1);
    frobk_images_[i] = to_elem(acck);
    if (i + 1 < n_) {
      acc1 = fp_mulmod(acc1, xp, modulus_, p_);
      acck = fp_mulmod(acck, xq, modulus_, p_);
    }
  }
}

ExtElem ExtFieldCtx::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += static_cast<std::int64_t>(p_);
  ExtElem e;
  e.c[0] = static_cast<std::uint32_t>(r);
  return e;
}

ExtElem ExtFieldCtx::add(const ExtElem& a, const ExtElem& b) const {
  ExtElem r;
  for (unsigned i = 0; i < n_; ++i) {
    u64 s = static_cast<u64>(a.c[i]) + b.c[i];
    if (s >= p_) s -= p_;
    r.c[i] = static_cast<std::uint32_t>(s);
  }
  return r;
}

ExtElem ExtFieldCtx::sub(const ExtElem& a, const ExtElem& b) const {
  ExtElem r;
  for (unsigned i = 0; i < n_; ++i) {
    u64 s = static_cast<u64>(a.c[i]) + p_ - b.c[i];
    if (s >= p_) s -= p_;
    r.c[i] = static_cast<std::uint32_t>(s);
  }
  return r;
}

ExtElem ExtFieldCtx::neg(const ExtElem& a) const { return sub(ExtElem{}, a); }

ExtElem ExtFieldCtx::mul(const ExtElem& a, const ExtElem& b) const {
  u64 col[2 * kMaxExtDegree] = {0};
  const unsigned n = n_;
  if (!big_digits_) {
    // Digit products < 2^32 and at most ~2n accumulations per column keep
    // every column below 2^39.
    for (unsigned i = 0; i < n; ++i) {
      const u64 ai = a.c[i];
      if (ai == 0) continue;
      for (unsigned j = 0; j < n; ++j) col[i + j] += ai * b.c[j];
    }
    for (unsigned d = 2 * n - 2; d >= n; --d) {
      const u64 v = col[d] % p_;
      if (v != 0) {
        for (unsigned j = 0; j < n; ++j) {
          const u64 mj = modulus_.c[j];
          if (mj != 0) col[d - n + j] += v * (p_ - mj);
        }
      }
      if (d == n) break;
    }
  } else {
    // Large characteristic (n <= 3 here): reduce every product eagerly.
    for (unsigned i = 0; i < n; ++i) {
      const u64 ai = a.c[i];
      if (ai == 0) continue;
      for (unsigned j = 0; j < n; ++j)
        col[i + j] += static_cast<u64>(static_cast<u128>(ai) * b.c[j] % p_);
    }
    for (unsigned d = 2 * n - 2; d >= n; --d) {
      const u64 v = col[d] % p_;
      if (v != 0) {
        for (unsigned j = 0; j < n; ++j) {
          const u64 mj = modulus_.c[j];
          if (mj != 0)
            col[d - n + j] +=
                static_cast<u64>(static_cast<u128>(v) * (p_ - mj) % p_);
        }
      }
      if (d == n) break;
    }
  }
  ExtElem r;
  for (unsigned i = 0; i < n; ++i)
    r.c[i] = static_cast<std::uint32_t>(col[i] % p_);
  return r;
}

ExtElem ExtFieldCtx::pow(const ExtElem& x, u128 e) const {
  ExtElem r = one();
  ExtElem base = x;
  while (e != 0) {
    if (e & 1) r = mul(r, base);
    e >>= 1;
    if (e != 0) base = mul(base, base);
  }
  return r;
}

ExtElem ExtFieldCtx::inv(const ExtElem& x) const {
  if (is_zero(x)) throw std::domain_error("inverse of zero");
  return pow(x, q2_ - 2);
}

ExtElem ExtFieldCtx::apply_basis_images(
    const ExtElem& x, const std::vector<ExtElem>& images) const {
  u64 col[kMaxExtDegree] = {0};
  for (unsigned i = 0; i < n_; ++i) {
    const u64 xi = x.c[i];
    if (xi == 0) continue;
    const ExtElem& img = images[i];
    if (!big_digits_) {
      for (unsigned j = 0; j < n_; ++j) col[j] += xi * img.c[j];
    } else {
      for (unsigned j = 0; j < n_; ++j)
        col[j] += static_cast<u64>(static_cast<u128>(xi) * img.c[j] % p_);
    }
  }
  ExtElem r;
  for (unsigned j = 0; j < n_; ++j)
    r.c[j] = static_cast<std::uint32_t>(col[j] % p_);
  return r;
}

ExtElem ExtFieldCtx::frobenius(const ExtElem& x, unsigned j) const {
  j %= n_;
  if (j == 0) return x;
  if (j == k_) return apply_basis_images(x, frobk_images_);
  ExtElem r = x;
  while (j >= k_) {
    r = apply_basis_images(r, frobk_images_);
    j -= k_;
  }
  for (; j > 0; --j) r = apply_basis_images(r, frob1_images_);
  return r;
}

ExtElem ExtFieldCtx::frobenius_q(const ExtElem& x) const {
  return apply_basis_images(x, frobk_images_);
}

std::vector<ExtElem> ExtFieldCtx::frobenius_images(unsigned j) const {
  std::vector<ExtElem> images(n_);
  for (unsigned i = 0; i < n_; ++i) {
    ExtElem basis;
    basis.c[i] = 1;
    images[i] = frobenius(basis, j);
  }
  return images;
}

ExtElem ExtFieldCtx::apply_linear(const ExtElem& x,
                                  const std::vector<ExtElem>& basis_images)
    const {
  return apply_basis_images(x, basis_images);
}

bool ExtFieldCtx::in_subfield_q(const ExtElem& x) const {
  return frobenius_q(x) == x;
}

u64 ExtFieldCtx::enc(const ExtElem& x) const {
  u64 v = 0;
  for (unsigned i = 0; i < n_; ++i) v += static_cast<u64>(x.c[i]) * p_pow_[i];
  return v;
}

ExtElem ExtFieldCtx::dec(u64 v) const {
  ExtElem e;
  for (unsigned i = 0; i < n_ && v != 0; ++i) {
    e.c[i] = static_cast<std::uint32_t>(v % p_);
    v /= p_;
  }
  return e;
}

ExtElem find_omega(const ExtFieldCtx& ctx, bool conjugate) {
  if (ctx.p() == 3) throw std::domain_error("characteristic 3 unsupported");
  const u64 m3 = (ctx.q2() - 1) / 3;
  ExtElem w;
  bool found = false;
  for (u64 cand = 1; cand < ctx.q2(); ++cand) {
    w = ctx.pow(ctx.dec(cand), m3);
    if (!(w == ctx.one())) {
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("no order-3 element found");
  const ExtElem w2 = ctx.sqr(w);
  const ExtElem first = ctx.enc(w) < ctx.enc(w2) ? w : w2;
  const ExtElem second = ctx.enc(w) < ctx.enc(w2) ? w2 : w;
  return conjugate ? second : first;
}

std::vector<ExtElem> enumerate_mu(const ExtFieldCtx& ctx) {
  std::vector<ExtElem> mu;
  mu.reserve(ctx.q() + 1);
  const ExtElem one = ctx.one();
  for (u64 v = 1; v < ctx.q2(); ++v) {
    const ExtElem x = ctx.dec(v);
    if (ctx.mul(ctx.frobenius_q(x), x) == one) {
      mu.push_back(x);
      if (mu.size() == ctx.q() + 1) break;
    }
  }
  return mu;
}

std::vector<ExtElem> enumerate_subfield_q(const ExtFieldCtx& ctx) {
  std::vector<ExtElem> sub;
  sub.reserve(ctx.q());
  for (u64 v = 0; v < ctx.q2(); ++v) {
    const ExtElem x = ctx.dec(v);
    if (ctx.in_subfield_q(x)) {
      sub.push_back(x);
      if (sub.size() == ctx.q()) break;
    }
  }
  return sub;
}

MobiusMap::MobiusMap(const ExtFieldCtx& ctx, const ExtElem& a,
                     const ExtElem& b, const ExtElem& c, const ExtElem& d)
    : a(a), b(b), c(c), d(d) {
  const ExtElem det = ctx.sub(ctx.mul(a, d), ctx.mul(b, c));
  if (ctx.is_zero(det))
    throw std::invalid_argument("degenerate Moebius map (ad - bc = 0)");
}

ProjPoint mobius_eval(const ExtFieldCtx& ctx, const MobiusMap& m,
                      const ProjPoint& x) {
  if (x.infinite) {
    if (ctx.is_zero(m.c)) return ProjPoint::at_infinity();
    return ProjPoint::finite(ctx.mul(m.a, ctx.inv(m.c)));
  }
  const ExtElem den = ctx.add(ctx.mul(m.c, x.v), m.d);
  if (ctx.is_zero(den)) return ProjPoint::at_infinity();
  const ExtElem num = ctx.add(ctx.mul(m.a, x.v), m.b);
  return ProjPoint::finite(ctx.mul(num, ctx.inv(den)));
}

Gf2Packed Gf2Packed::from(const ExtFieldCtx& ctx) {
  if (ctx.p() != 2)
    throw std::invalid_argument("packed kernel requires characteristic 2");
  Gf2Packed g;
  g.n = ctx.n();
  for (size_t i = 0; i < ctx.modulus().c.size(); ++i)
    if (ctx.modulus().c[i]) g.modulus_bits |= (1ull << i);
  return g;
}

u64 Gf2Packed::mul(u64 a, u64 b) const {
  u128 acc = 0;
  u128 aa = a;
  while (b != 0) {
    if (b & 1) acc ^= aa;
    aa <<= 1;
    b >>= 1;
  }
  for (int i = 2 * static_cast<int>(n) - 2; i >= static_cast<int>(n); --i) {
    if ((acc >> i) & 1)
      acc ^= static_cast<u128>(modulus_bits) << (i - static_cast<int>(n));
  }
  return static_cast<u64>(acc);
}

u64 Gf2Packed::pow(u64 a, u128 e) const {
  u64 r = 1;
  while (e != 0) {
    if (e & 1) r = mul(r, a);
    e >>= 1;
    if (e != 0) a = mul(a, a);
  }
  return r;
}

}  // namespace permpenta
