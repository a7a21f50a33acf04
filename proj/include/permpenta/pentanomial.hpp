#ifndef PERMPENTA_PENTANOMIAL_HPP
#define PERMPENTA_PENTANOMIAL_HPP

#include <map>
#include <optional>
#include <utility>

#include "permpenta/field.hpp"

namespace permpenta {

/// Which of the two construction families a spec belongs to. They differ in
/// the raw coefficient polynomial, the beta normalizer, and the permutation
/// criterion; the CLI exposes them as --theorem 1 and --theorem 2.
enum class Theorem { T1, T2 };

/// Parameters of one constructed polynomial f(X) = X^r B_z(X^(q-1)) over
/// F_{q^2} with q = p^k and Q = p^a, R = p^b, S = p^c.
struct PentanomialSpec {
  Theorem theorem = Theorem::T1;
  int z = 1;
  u64 p = 2;
  unsigned k = 1;
  unsigned a = 0, b = 0, c = 0;
  u128 Q = 1, R = 1, S = 1;
  u128 r = 3;
  u64 q = 2;

  /// Validates p prime and != 3, z in {1,2}, q^2 <= 2^63, and
  /// r == Q+R+S (mod q+1); r defaults to Q+R+S.
  static PentanomialSpec make(Theorem theorem, int z, u64 p, unsigned k,
                              unsigned a, unsigned b, unsigned c,
                              std::optional<u128> r = std::nullopt);

  u128 exp_sum() const { return Q + R + S; }
};

/// The residues of (Q, R, S) mod 3, each written as 1 or -1.
struct ResidueTriple {
  int a = 1, b = 1, c = 1;
  bool operator==(const ResidueTriple&) const = default;
};

ResidueTriple sigma_of(const PentanomialSpec& spec);

/// Polynomial over F_{q^2} as an exponent -> nonzero coefficient map.
struct SparsePoly {
  std::map<u128, ExtElem> terms;

  bool operator==(const SparsePoly&) const = default;
  size_t term_count() const { return terms.size(); }
  bool is_zero() const { return terms.empty(); }
  /// Largest exponent; zero polynomial reports 0.
  u128 max_exp() const { return terms.empty() ? 0 : terms.rbegin()->first; }
};

void sparse_add_term(SparsePoly& poly, u128 e, const ExtElem& coeff,
                     const ExtFieldCtx& ctx);
ExtElem sparse_coeff(const SparsePoly& poly, u128 e);
SparsePoly sparse_add(const SparsePoly& a, const SparsePoly& b,
                      const ExtFieldCtx& ctx);
SparsePoly sparse_sub(const SparsePoly& a, const SparsePoly& b,
                      const ExtFieldCtx& ctx);
SparsePoly sparse_mul(const SparsePoly& a, const SparsePoly& b,
                      const ExtFieldCtx& ctx);
SparsePoly sparse_scale(const SparsePoly& a, const ExtElem& s,
                        const ExtFieldCtx& ctx);
/// X^span * a(1/X); every exponent of a must be <= span.
SparsePoly sparse_reverse(const SparsePoly& a, u128 span,
                          const ExtFieldCtx& ctx);
ExtElem sparse_eval(const SparsePoly& a, const ExtElem& x,
                    const ExtFieldCtx& ctx);

/// The raw eight-term coefficient polynomials (C_1, C_2) of the spec's
/// family, with colliding exponents merged. Cross-checked internally against
/// the factored products N, D via C_1 = -omega*N + D and C_2 = N - omega*D.
std::pair<SparsePoly, SparsePoly> build_c_polys(const PentanomialSpec& spec,
                                                const ExtFieldCtx& ctx,
                                                const ExtElem& omega);

/// The nonzero normalizing scalar beta of the spec's family.
ExtElem select_beta(const PentanomialSpec& spec, const ExtFieldCtx& ctx,
                    const ExtElem& omega);

/// Observable structure of a built B_z.
struct BzProperties {
  size_t term_count = 0;
  bool coeffs_prime_field = false;
  bool coeffs_pm_one = false;
  bool params_pairwise_distinct = false;
};

BzProperties classify_bz(const SparsePoly& bz, const PentanomialSpec& spec,
                         const ExtFieldCtx& ctx);

/// B_z = C_z / beta. Guarantees (checked, violations throw logic_error):
/// at most five terms, all coefficients in the prime field, and
/// coefficients in {1,-1} when Q, R, S are pairwise distinct.
SparsePoly build_bz(const PentanomialSpec& spec, const ExtFieldCtx& ctx,
                    const ExtElem& omega);

/// The closed-form B_z for a listed residue triple, instantiated at
/// (Q, R, S) with integer coefficients mapped into F_p and exponent
/// collisions merged. Unlisted triples raise not_listed_error.
SparsePoly closed_form_table(Theorem theorem, int z, const ResidueTriple& sigma,
                             u128 Q, u128 R, u128 S, const ExtFieldCtx& ctx);

/// A parameter reordering whose residue triple is listed, plus the sign
/// (computed as the ratio of the two betas) with
/// B_z(original) == sign * B_z(reordered).
struct CanonicalForm {
  PentanomialSpec spec;
  int sign = 1;
};

CanonicalForm canonicalize_residues(const PentanomialSpec& spec,
                                    const ExtFieldCtx& ctx,
                                    const ExtElem& omega);

/// f(X) = X^r B_z(X^(q-1)); exponent arithmetic is overflow-checked.
SparsePoly assemble_f(const PentanomialSpec& spec, const SparsePoly& bz,
                      const ExtFieldCtx& ctx);

inline constexpr u128 kDefaultGcdDegreeCap = u128(1) << 20;

/// Monic gcd over F_{q^2}[X], computed on dense form (degrees capped).
SparsePoly poly_gcd_ext(const SparsePoly& A, const SparsePoly& B,
                        const ExtFieldCtx& ctx,
                        u128 degree_cap = kDefaultGcdDegreeCap);

}  // namespace permpenta

#endif  // PERMPENTA_PENTANOMIAL_HPP
