#include "permpenta/pentanomial.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace permpenta {

PentanomialSpec PentanomialSpec::make(Theorem theorem, int z, u64 p,
                                      unsigned k, unsigned a, unsigned b,
                                      unsigned c, std::optional<u128> r) {
  if (p == 3) throw std::invalid_argument("characteristic 3 unsupported");
  PrimeModulus::checked(p);
  if (z != 1 && z != 2) throw std::invalid_argument("z must be 1 or 2");
  if (k == 0) throw std::invalid_argument("k must be positive");
  const u128 q2 = checked_pow_u128(p, 2 * k);
  if (q2 > (static_cast<u128>(1) << 63))
    throw limits_error("field size q^2 exceeds 2^63");

  PentanomialSpec s;
  s.theorem = theorem;
  s.z = z;
  s.p = p;
  s.k = k;
  s.a = a;
  s.b = b;
  s.c = c;
  s.q = static_cast<u64>(checked_pow_u128(p, k));
  s.Q = checked_pow_u128(p, a);
  s.R = checked_pow_u128(p, b);
  s.S = checked_pow_u128(p, c);
  const u128 sum = checked_add_u128(checked_add_u128(s.Q, s.R), s.S);
  s.r = r.value_or(sum);
  if (s.r == 0) throw std::invalid_argument("r must be positive");
  const u64 qp1 = s.q + 1;
  if (s.r % qp1 != sum % qp1)
    throw std::invalid_argument("r must be congruent to Q+R+S mod q+1");
  return s;
}

ResidueTriple sigma_of(const PentanomialSpec& spec) {
  auto comp = [](u128 v) { return v % 3 == 1 ? 1 : -1; };
  return ResidueTriple{comp(spec.Q), comp(spec.R), comp(spec.S)};
}

void sparse_add_term(SparsePoly& poly, u128 e, const ExtElem& coeff,
                     const ExtFieldCtx& ctx) {
  if (ctx.is_zero(coeff)) return;
  auto it = poly.terms.find(e);
  if (it == poly.terms.end()) {
    poly.terms.emplace(e, coeff);
    return;
  }
  it->second = ctx.add(it->second, coeff);
  if (ctx.is_zero(it->second)) poly.terms.erase(it);
}

ExtElem sparse_coeff(const SparsePoly& poly, u128 e) {
  auto it = poly.terms.find(e);
  return it == poly.terms.end() ? ExtElem{} : it->second;
}

SparsePoly sparse_add(const SparsePoly& a, const SparsePoly& b,
                      const ExtFieldCtx& ctx) {
  SparsePoly r = a;
  for (const auto& [e, c] : b.terms) sparse_add_term(r, e, c, ctx);
  return r;
}

SparsePoly sparse_sub(const SparsePoly& a, const SparsePoly& b,
                      const ExtFieldCtx& ctx) {
  SparsePoly r = a;
  for (const auto& [e, c] : b.terms) sparse_add_term(r, e, ctx.neg(c), ctx);
  return r;
}

SparsePoly sparse_mul(const SparsePoly& a, const SparsePoly& b,
                      const ExtFieldCtx& ctx) {
  SparsePoly r;
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms)
      sparse_add_term(r, checked_add_u128(ea, eb), ctx.mul(ca, cb), ctx);
  return r;
}

SparsePoly sparse_scale(const SparsePoly& a, const ExtElem& s,
                        const ExtFieldCtx& ctx) {
  SparsePoly r;
  for (const auto& [e, c] : a.terms) sparse_add_term(r, e, ctx.mul(c, s), ctx);
  return r;
}

SparsePoly sparse_reverse(const SparsePoly& a, u128 span,
                          const ExtFieldCtx& ctx) {
  SparsePoly r;
  for (const auto& [e, c] : a.terms) {
    if (e > span)
      throw std::invalid_argument("reversal span smaller than a term exponent");
    sparse_add_term(r, span - e, c, ctx);
  }
  return r;
}

ExtElem sparse_eval(const SparsePoly& a, const ExtElem& x,
                    const ExtFieldCtx& ctx) {
  ExtElem acc = ctx.zero();
  for (const auto& [e, c] : a.terms)
    acc = ctx.add(acc, ctx.mul(c, ctx.pow(x, e)));
  return acc;
}

namespace {

ExtElem omega_pow(const ExtFieldCtx& ctx, const ExtElem& omega, u128 e) {
  switch (static_cast<unsigned>(e % 3)) {
    case 0: return ctx.one();
    case 1: return omega;
    default: return ctx.sqr(omega);
  }
}

// (X^e + w_hi) or (w_lo X^e + 1) style binomial.
SparsePoly binomial(u128 e, const ExtElem& lead, const ExtElem& constant,
                    const ExtFieldCtx& ctx) {
  SparsePoly r;
  sparse_add_term(r, e, lead, ctx);
  sparse_add_term(r, 0, constant, ctx);
  return r;
}

}  // namespace

std::pair<SparsePoly, SparsePoly> build_c_polys(const PentanomialSpec& spec,
                                                const ExtFieldCtx& ctx,
                                                const ExtElem& omega) {
  if (!(ctx.pow(omega, 3) == ctx.one()) || omega == ctx.one())
    throw std::domain_error("omega must have multiplicative order 3");
  const u128 Q = spec.Q, R = spec.R, S = spec.S;
  const u128 sum = spec.exp_sum();
  auto w = [&](u128 e) { return omega_pow(ctx, omega, e); };
  auto coeff = [&](u128 e1, u128 e2) { return ctx.sub(w(e1), w(e2)); };

  SparsePoly c1;
  if (spec.theorem == Theorem::T1) {
    sparse_add_term(c1, sum, coeff(sum, 1), ctx);
    sparse_add_term(c1, Q + R, coeff(Q + R, S + 1), ctx);
    sparse_add_term(c1, Q + S, coeff(Q + S, R + 1), ctx);
    sparse_add_term(c1, R + S, coeff(R + S, Q + 1), ctx);
    sparse_add_term(c1, Q, coeff(Q, R + S + 1), ctx);
    sparse_add_term(c1, R, coeff(R, Q + S + 1), ctx);
    sparse_add_term(c1, S, coeff(S, Q + R + 1), ctx);
    sparse_add_term(c1, 0, coeff(0, sum + 1), ctx);
  } else {
    sparse_add_term(c1, sum, coeff(Q + S, R + 1), ctx);
    sparse_add_term(c1, Q + R, coeff(Q, R + S + 1), ctx);
    sparse_add_term(c1, Q + S, coeff(sum, 1), ctx);
    sparse_add_term(c1, R + S, coeff(S, Q + R + 1), ctx);
    sparse_add_term(c1, Q, coeff(Q + R, S + 1), ctx);
    sparse_add_term(c1, R, coeff(0, sum + 1), ctx);
    sparse_add_term(c1, S, coeff(R + S, Q + 1), ctx);
    sparse_add_term(c1, 0, coeff(R, Q + S + 1), ctx);
  }
  SparsePoly c2 = sparse_reverse(c1, sum, ctx);

  // Factored route: the same pair must arise from the three-binomial
  // products N, D as C_1 = -omega*N + D and C_2 = N - omega*D.
  const ExtElem one = ctx.one();
  SparsePoly n_poly, d_poly;
  if (spec.theorem == Theorem::T1) {
    n_poly = sparse_mul(
        sparse_mul(binomial(Q, one, w(Q), ctx), binomial(R, one, w(R), ctx),
                   ctx),
        binomial(S, one, w(S), ctx), ctx);
    d_poly = sparse_mul(
        sparse_mul(binomial(Q, w(Q), one, ctx), binomial(R, w(R), one, ctx),
                   ctx),
        binomial(S, w(S), one, ctx), ctx);
  } else {
    n_poly = sparse_mul(
        sparse_mul(binomial(Q, one, w(Q), ctx), binomial(R, w(R), one, ctx),
                   ctx),
        binomial(S, one, w(S), ctx), ctx);
    d_poly = sparse_mul(
        sparse_mul(binomial(Q, w(Q), one, ctx), binomial(R, one, w(R), ctx),
                   ctx),
        binomial(S, w(S), one, ctx), ctx);
  }
  const SparsePoly v_poly =
      sparse_sub(d_poly, sparse_scale(n_poly, omega, ctx), ctx);
  const SparsePoly u_poly =
      sparse_sub(n_poly, sparse_scale(d_poly, omega, ctx), ctx);
  if (!(v_poly == c1) || !(u_poly == c2))
    throw std::logic_error("coefficient/factored forms of C_z disagree");
  return {std::move(c1), std::move(c2)};
}

ExtElem select_beta(const PentanomialSpec& spec, const ExtFieldCtx& ctx,
                    const ExtElem& omega) {
  auto w = [&](u128 e) { return omega_pow(ctx, omega, e); };
  ExtElem beta;
  if (spec.theorem == Theorem::T1) {
    const u128 sum = spec.exp_sum();
    beta = (sum % 3 == 1) ? ctx.sub(w(spec.Q + spec.R), w(spec.S + 1))
                          : ctx.sub(w(sum), omega);
  } else {
    beta = ((spec.Q + spec.S) % 3 == (spec.R + 1) % 3)
               ? ctx.sub(w(spec.Q), w(spec.R + spec.S + 1))
               : ctx.sub(w(spec.Q + spec.S), w(spec.R + 1));
  }
  if (ctx.is_zero(beta))
    throw std::logic_error("beta vanished; the branch rules exclude this");
  return beta;
}

BzProperties classify_bz(const SparsePoly& bz, const PentanomialSpec& spec,
                         const ExtFieldCtx& ctx) {
  BzProperties props;
  props.term_count = bz.term_count();
  props.coeffs_prime_field = true;
  props.coeffs_pm_one = true;
  const ExtElem one = ctx.one();
  const ExtElem minus_one = ctx.from_int(-1);
  for (const auto& [e, c] : bz.terms) {
    if (!(ctx.frobenius(c, 1) == c)) props.coeffs_prime_field = false;
    if (!(c == one) && !(c == minus_one)) props.coeffs_pm_one = false;
  }
  props.params_pairwise_distinct =
      spec.Q != spec.R && spec.Q != spec.S && spec.R != spec.S;
  return props;
}

SparsePoly build_bz(const PentanomialSpec& spec, const ExtFieldCtx& ctx,
                    const ExtElem& omega) {
  auto [c1, c2] = build_c_polys(spec, ctx, omega);
  const ExtElem beta_inv = ctx.inv(select_beta(spec, ctx, omega));
  SparsePoly bz = sparse_scale(spec.z == 1 ? c1 : c2, beta_inv, ctx);
  const BzProperties props = classify_bz(bz, spec, ctx);
  if (props.term_count > 5)
    throw std::logic_error("B_z has more than five terms");
  if (!props.coeffs_prime_field)
    throw std::logic_error("B_z has a coefficient outside the prime field");
  if (props.params_pairwise_distinct && !props.coeffs_pm_one)
    throw std::logic_error(
        "B_z has a coefficient outside {1,-1} for distinct Q,R,S");
  return bz;
}

namespace {

enum class Combo { kSum, kQR, kQS, kRS, kQ, kR, kS, kOne };

struct TableFormula {
  Combo combo[5];
  int sign[5];
};

struct TableRow {
  int sa, sb, sc;
  TableFormula b1, b2;
};

constexpr TableRow kTable1[] = {
    {1, 1, 1,
     {{Combo::kSum, Combo::kQ, Combo::kR, Combo::kS, Combo::kOne},
      {1, -1, -1, -1, 1}},
     {{Combo::kSum, Combo::kQR, Combo::kQS, Combo::kRS, Combo::kOne},
      {1, -1, -1, -1, 1}}},
    {1, 1, -1,
     {{Combo::kQR, Combo::kQS, Combo::kRS, Combo::kS, Combo::kOne},
      {1, -1, -1, 1, -1}},
     {{Combo::kSum, Combo::kQR, Combo::kQ, Combo::kR, Combo::kS},
      {-1, 1, -1, -1, 1}}},
    {1, -1, -1,
     {{Combo::kSum, Combo::kRS, Combo::kQ, Combo::kR, Combo::kS},
      {1, -1, -1, 1, 1}},
     {{Combo::kQR, Combo::kQS, Combo::kRS, Combo::kQ, Combo::kOne},
      {1, 1, -1, -1, 1}}},
    {-1, -1, -1,
     {{Combo::kSum, Combo::kQR, Combo::kQS, Combo::kRS, Combo::kOne},
      {1, -1, -1, -1, 1}},
     {{Combo::kSum, Combo::kQ, Combo::kR, Combo::kS, Combo::kOne},
      {1, -1, -1, -1, 1}}},
};

constexpr TableRow kTable2[] = {
    {1, 1, 1,
     {{Combo::kQR, Combo::kQS, Combo::kRS, Combo::kR, Combo::kOne},
      {1, -1, 1, -1, 1}},
     {{Combo::kSum, Combo::kQS, Combo::kQ, Combo::kR, Combo::kS},
      {1, -1, 1, -1, 1}}},
    {1, 1, -1,
     {{Combo::kSum, Combo::kRS, Combo::kQ, Combo::kR, Combo::kS},
      {1, -1, -1, 1, 1}},
     {{Combo::kQR, Combo::kQS, Combo::kRS, Combo::kQ, Combo::kOne},
      {1, 1, -1, -1, 1}}},
    {1, -1, 1,
     {{Combo::kSum, Combo::kQ, Combo::kR, Combo::kS, Combo::kOne},
      {1, -1, -1, -1, 1}},
     {{Combo::kSum, Combo::kQR, Combo::kQS, Combo::kRS, Combo::kOne},
      {1, -1, -1, -1, 1}}},
    {1, -1, -1,
     {{Combo::kQR, Combo::kQS, Combo::kRS, Combo::kS, Combo::kOne},
      {1, -1, -1, 1, -1}},
     {{Combo::kSum, Combo::kQR, Combo::kQ, Combo::kR, Combo::kS},
      {-1, 1, -1, -1, 1}}},
    {-1, 1, -1,
     {{Combo::kSum, Combo::kQR, Combo::kQS, Combo::kRS, Combo::kOne},
      {1, -1, -1, -1, 1}},
     {{Combo::kSum, Combo::kQ, Combo::kR, Combo::kS, Combo::kOne},
      {1, -1, -1, -1, 1}}},
    {-1, -1, -1,
     {{Combo::kSum, Combo::kQS, Combo::kQ, Combo::kR, Combo::kS},
      {1, -1, 1, -1, 1}},
     {{Combo::kQR, Combo::kQS, Combo::kRS, Combo::kR, Combo::kOne},
      {1, -1, 1, -1, 1}}},
};

u128 combo_exponent(Combo combo, u128 Q, u128 R, u128 S) {
  switch (combo) {
    case Combo::kSum:
      return checked_add_u128(checked_add_u128(Q, R), S);
    case Combo::kQR: return checked_add_u128(Q, R);
    case Combo::kQS: return checked_add_u128(Q, S);
    case Combo::kRS: return checked_add_u128(R, S);
    case Combo::kQ: return Q;
    case Combo::kR: return R;
    case Combo::kS: return S;
    case Combo::kOne: return 0;
  }
  return 0;
}

}  // namespace

SparsePoly closed_form_table(Theorem theorem, int z, const ResidueTriple& sigma,
                             u128 Q, u128 R, u128 S, const ExtFieldCtx& ctx) {
  if (z != 1 && z != 2) throw std::invalid_argument("z must be 1 or 2");
  const TableRow* row = nullptr;
  if (theorem == Theorem::T1) {
    for (const TableRow& cand : kTable1)
      if (cand.sa == sigma.a && cand.sb == sigma.b && cand.sc == sigma.c)
        row = &cand;
  } else {
    for (const TableRow& cand : kTable2)
      if (cand.sa == sigma.a && cand.sb == sigma.b && cand.sc == sigma.c)
        row = &cand;
  }
  if (row == nullptr)
    throw not_listed_error("residue triple has no closed-form table row");
  const TableFormula& formula = (z == 1) ? row->b1 : row->b2;
  SparsePoly poly;
  for (int i = 0; i < 5; ++i) {
    sparse_add_term(poly, combo_exponent(formula.combo[i], Q, R, S),
                    ctx.from_int(formula.sign[i]), ctx);
  }
  return poly;
}

CanonicalForm canonicalize_residues(const PentanomialSpec& spec,
                                    const ExtFieldCtx& ctx,
                                    const ExtElem& omega) {
  const ResidueTriple sigma = sigma_of(spec);
  unsigned idx[3] = {spec.a, spec.b, spec.c};
  if (spec.theorem == Theorem::T1) {
    // Any reordering is allowed; stable-sort the residues descending.
    int comps[3] = {sigma.a, sigma.b, sigma.c};
    int order[3] = {0, 1, 2};
    std::stable_sort(order, order + 3,
                     [&](int lhs, int rhs) { return comps[lhs] > comps[rhs]; });
    unsigned permuted[3] = {idx[order[0]], idx[order[1]], idx[order[2]]};
    std::copy(permuted, permuted + 3, idx);
  } else {
    // Only the outer parameters may be swapped.
    if (sigma.a == -1 && sigma.c == 1) std::swap(idx[0], idx[2]);
  }
  PentanomialSpec permuted =
      PentanomialSpec::make(spec.theorem, spec.z, spec.p, spec.k, idx[0],
                            idx[1], idx[2], spec.r);
  const ExtElem beta_old = select_beta(spec, ctx, omega);
  const ExtElem beta_new = select_beta(permuted, ctx, omega);
  const ExtElem ratio = ctx.mul(beta_new, ctx.inv(beta_old));
  int sign;
  if (ratio == ctx.one()) {
    sign = 1;
  } else if (ratio == ctx.from_int(-1)) {
    sign = -1;
  } else {
    throw std::logic_error("beta ratio under reordering is not +-1");
  }
  return CanonicalForm{std::move(permuted), sign};
}

SparsePoly assemble_f(const PentanomialSpec& spec, const SparsePoly& bz,
                      const ExtFieldCtx& ctx) {
  SparsePoly f;
  const u128 qm1 = spec.q - 1;
  for (const auto& [e, c] : bz.terms) {
    const u128 fe = checked_add_u128(spec.r, checked_mul_u128(qm1, e));
    sparse_add_term(f, fe, c, ctx);
  }
  if (f.term_count() != bz.term_count())
    throw std::logic_error("exponent collision while assembling f");
  return f;
}

namespace {

using DensePoly = std::vector<ExtElem>;  // index = exponent

void dense_trim(DensePoly& a, const ExtFieldCtx& ctx) {
  while (!a.empty() && ctx.is_zero(a.back())) a.pop_back();
}

DensePoly dense_from_sparse(const SparsePoly& a, const ExtFieldCtx& ctx,
                            u128 degree_cap) {
  if (a.is_zero()) return {};
  if (a.max_exp() > degree_cap)
    throw limits_error("dense degree exceeds the configured cap");
  DensePoly d(static_cast<size_t>(a.max_exp()) + 1, ctx.zero());
  for (const auto& [e, c] : a.terms) d[static_cast<size_t>(e)] = c;
  return d;
}

void dense_make_monic(DensePoly& a, const ExtFieldCtx& ctx) {
  if (a.empty()) return;
  const ExtElem lead_inv = ctx.inv(a.back());
  for (ExtElem& c : a) c = ctx.mul(c, lead_inv);
}

DensePoly dense_mod(DensePoly a, const DensePoly& b, const ExtFieldCtx& ctx) {
  // b monic and nonzero.
  while (a.size() >= b.size()) {
    const ExtElem lead = a.back();
    const size_t shift = a.size() - b.size();
    if (!ctx.is_zero(lead)) {
      for (size_t j = 0; j < b.size(); ++j)
        a[j + shift] = ctx.sub(a[j + shift], ctx.mul(lead, b[j]));
    }
    a.pop_back();
    dense_trim(a, ctx);
  }
  return a;
}

}  // namespace

SparsePoly poly_gcd_ext(const SparsePoly& A, const SparsePoly& B,
                        const ExtFieldCtx& ctx, u128 degree_cap) {
  if (A.is_zero() && B.is_zero())
    throw std::invalid_argument("gcd of two zero polynomials");
  DensePoly a = dense_from_sparse(A, ctx, degree_cap);
  DensePoly b = dense_from_sparse(B, ctx, degree_cap);
  dense_make_monic(a, ctx);
  dense_make_monic(b, ctx);
  while (!b.empty()) {
    DensePoly r = dense_mod(std::move(a), b, ctx);
    a = std::move(b);
    b = std::move(r);
    dense_make_monic(b, ctx);
  }
  SparsePoly g;
  for (size_t i = 0; i < a.size(); ++i) sparse_add_term(g, i, a[i], ctx);
  return g;
}

}  // namespace permpenta
