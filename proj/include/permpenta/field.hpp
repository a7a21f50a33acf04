#ifndef PERMPENTA_FIELD_HPP
#define PERMPENTA_FIELD_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "permpenta/util.hpp"

namespace permpenta {

/// Hard ceiling on the extension degree n = 2k; p^n <= 2^63 keeps the
/// base-p encoding of every element inside one 64-bit word.
inline constexpr unsigned kMaxExtDegree = 63;

/// A prime characteristic, validated at construction.
struct PrimeModulus {
  u64 p;
  static PrimeModulus checked(u64 p);
};

/// Polynomial over F_p, constant coefficient first, canonical form
/// (no zero leading coefficient). The zero polynomial is the empty
/// vector and has degree() == -1.
struct FpPoly {
  std::vector<std::uint32_t> c;

  std::int64_t degree() const { return static_cast<std::int64_t>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool operator==(const FpPoly&) const = default;

  void trim();
};

bool fp_poly_is_irreducible(const FpPoly& m, u64 p);

/// The lexicographically smallest monic irreducible of degree n over F_p,
/// comparing coefficient tuples from the constant term upward.
FpPoly find_irreducible(u64 p, unsigned n);

/// Element of F_{p^n}: the residue-class representative of degree < n,
/// constant coefficient in c[0]. Digits at indices >= n stay zero so that
/// comparison and hashing are representation-independent.
struct ExtElem {
  std::array<std::uint32_t, kMaxExtDegree> c{};
  bool operator==(const ExtElem&) const = default;
};

/// A point of the projective line over F_{p^n}.
struct ProjPoint {
  bool infinite = false;
  ExtElem v{};

  static ProjPoint at_infinity() { return ProjPoint{true, ExtElem{}}; }
  static ProjPoint finite(const ExtElem& x) { return ProjPoint{false, x}; }
  bool operator==(const ProjPoint&) const = default;
};

/// Arithmetic context for F_{q^2} = F_p[X]/(m) with q = p^k, m the
/// deterministic degree-2k irreducible from find_irreducible. Immutable
/// after construction; all operations are const and thread-safe.
class ExtFieldCtx {
 public:
  ExtFieldCtx(u64 p, unsigned k);
  ExtFieldCtx(u64 p, unsigned k, FpPoly modulus);

  u64 p() const { return p_; }
  unsigned k() const { return k_; }
  unsigned n() const { return n_; }
  u64 q() const { return q_; }
  u64 q2() const { return q2_; }
  const FpPoly& modulus() const { return modulus_; }

  ExtElem zero() const { return ExtElem{}; }
  ExtElem one() const { return from_int(1); }
  ExtElem from_int(std::int64_t v) const;
  bool is_zero(const ExtElem& x) const { return x == ExtElem{}; }

  ExtElem add(const ExtElem& a, const ExtElem& b) const;
  ExtElem sub(const ExtElem& a, const ExtElem& b) const;
  ExtElem neg(const ExtElem& a) const;
  ExtElem mul(const ExtElem& a, const ExtElem& b) const;
  ExtElem sqr(const ExtElem& a) const { return mul(a, a); }
  /// x^e by square-and-multiply; pow(x, 0) == 1 including x == 0.
  ExtElem pow(const ExtElem& x, u128 e) const;
  /// Multiplicative inverse; throws std::domain_error on zero.
  ExtElem inv(const ExtElem& x) const;

  /// x^(p^j). Additive and multiplicative; j is reduced mod n.
  ExtElem frobenius(const ExtElem& x, unsigned j) const;
  /// x^q, the involution fixing exactly the subfield F_q.
  ExtElem frobenius_q(const ExtElem& x) const;
  bool in_subfield_q(const ExtElem& x) const;

  /// Basis images of x -> x^(p^j), for tabulating F_p-linear maps.
  std::vector<ExtElem> frobenius_images(unsigned j) const;
  /// Applies an F_p-linear map given by its basis images.
  ExtElem apply_linear(const ExtElem& x,
                       const std::vector<ExtElem>& basis_images) const;

  /// Canonical integer encoding: digits of x as a base-p integer with the
  /// constant coefficient least significant. Element enumeration order is
  /// dec(0), dec(1), ..., dec(q2-1).
  u64 enc(const ExtElem& x) const;
  ExtElem dec(u64 v) const;

 private:
  void init();
  ExtElem apply_basis_images(const ExtElem& x,
                             const std::vector<ExtElem>& images) const;

  u64 p_;
  unsigned k_;
  unsigned n_;
  u64 q_ = 0;
  u64 q2_ = 0;
  FpPoly modulus_;
  bool big_digits_ = false;  // p > 2^16: reduce digit products eagerly
  std::vector<u64> p_pow_;
  std::vector<ExtElem> frob1_images_;  // basis images under x -> x^p
  std::vector<ExtElem> frobk_images_;  // basis images under x -> x^q
};

/// The order-3 element of F_{q^2}^* that comes first in enumeration order
/// (its conjugate when the flag is set). Requires p != 3.
ExtElem find_omega(const ExtFieldCtx& ctx, bool conjugate = false);

/// All q+1 solutions of x^(q+1) = 1, in enumeration order.
std::vector<ExtElem> enumerate_mu(const ExtFieldCtx& ctx);

/// The q elements fixed by x -> x^q, in enumeration order.
std::vector<ExtElem> enumerate_subfield_q(const ExtFieldCtx& ctx);

/// The fractional linear map X -> (aX + b)/(cX + d); construction rejects
/// degenerate coefficient matrices (ad - bc = 0).
struct MobiusMap {
  ExtElem a, b, c, d;
  MobiusMap(const ExtFieldCtx& ctx, const ExtElem& a, const ExtElem& b,
            const ExtElem& c, const ExtElem& d);
};

ProjPoint mobius_eval(const ExtFieldCtx& ctx, const MobiusMap& m,
                      const ProjPoint& x);

/// Bit-packed arithmetic for characteristic 2; an element is its encoding.
struct Gf2Packed {
  unsigned n = 0;
  u64 modulus_bits = 0;  // bit n set, lower bits from the defining polynomial

  static Gf2Packed from(const ExtFieldCtx& ctx);
  u64 mul(u64 a, u64 b) const;
  u64 pow(u64 a, u128 e) const;
};

}  // namespace permpenta

#endif  // PERMPENTA_FIELD_HPP
