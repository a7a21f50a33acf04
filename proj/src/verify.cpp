#include "permpenta/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstring>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_set>
#include <utility>

namespace permpenta {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               t0)
      .count();
}

std::int64_t elapsed_us(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() -
                                                               t0)
      .count();
}

void ensure_ctx_matches(const PentanomialSpec& spec, const ExtFieldCtx& ctx) {
  if (spec.p != ctx.p() || spec.k != ctx.k())
    throw std::invalid_argument("spec and field context disagree on (p, k)");
}

std::vector<u64> distinct_prime_factors(u64 m) {
  std::vector<u64> primes;
  for (u64 d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      primes.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) primes.push_back(m);
  return primes;
}

ExtElem find_generator(const ExtFieldCtx& ctx, const std::vector<u64>& primes,
                       u64 order) {
  for (u64 v = 2; v < ctx.q2(); ++v) {
    const ExtElem x = ctx.dec(v);
    bool ok = true;
    for (u64 ell : primes) {
      if (ctx.pow(x, order / ell) == ctx.one()) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  throw std::logic_error("no generator of the multiplicative group found");
}

// Occupancy bitmap with duplicate detection.
struct BitSet {
  std::vector<u64> w;
  explicit BitSet(u64 bits) : w((bits + 63) / 64, 0) {}
  // Returns true when the bit was already set.
  bool test_and_set(u64 i) {
    u64& word = w[i >> 6];
    const u64 mask = 1ull << (i & 63);
    const bool dup = (word & mask) != 0;
    word |= mask;
    return dup;
  }
};

// Merges per-partition occupancy; a bit present twice means a duplicate.
bool merge_disjoint(std::vector<BitSet>& parts) {
  for (size_t widx = 0; widx < parts[0].w.size(); ++widx) {
    u64 acc = 0;
    for (BitSet& part : parts) {
      const u64 pw = part.w[widx];
      if ((acc & pw) != 0) return false;
      acc |= pw;
    }
  }
  return true;
}

void run_partitions(unsigned workers, u64 total,
                    const std::function<void(unsigned, u64, u64)>& fn) {
  if (workers <= 1 || total < 2 * workers) {
    fn(0, 0, total);
    return;
  }
  std::vector<std::thread> threads;
  const u64 chunk = total / workers;
  std::exception_ptr error;
  std::mutex error_mu;
  for (unsigned w = 0; w < workers; ++w) {
    const u64 lo = w * chunk;
    const u64 hi = (w + 1 == workers) ? total : lo + chunk;
    threads.emplace_back([&, w, lo, hi] {
      try {
        fn(w, lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

void run_tasks(unsigned workers, u64 count,
               const std::function<void(u64)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (u64 i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<u64> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      const u64 i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned w = 1; w < workers; ++w) threads.emplace_back(body);
  body();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

// Increments the digit vector of x in the canonical enumeration order.
void odometer_next(ExtElem& x, u64 p, unsigned n) {
  for (unsigned i = 0; i < n; ++i) {
    if (++x.c[i] < p) return;
    x.c[i] = 0;
  }
}

struct GenericTerm {
  u128 e;
  ExtElem c;
};

std::vector<GenericTerm> snapshot_terms(const SparsePoly& f) {
  std::vector<GenericTerm> terms;
  terms.reserve(f.terms.size());
  for (const auto& [e, c] : f.terms) terms.push_back(GenericTerm{e, c});
  return terms;
}

ExtElem eval_terms(const std::vector<GenericTerm>& terms, const ExtElem& x,
                   const ExtFieldCtx& ctx) {
  ExtElem acc = ctx.zero();
  for (const GenericTerm& t : terms)
    acc = ctx.add(acc, ctx.mul(t.c, ctx.pow(x, t.e)));
  return acc;
}

std::vector<u64> packed_images(const ExtFieldCtx& ctx,
                               const std::vector<ExtElem>& images) {
  std::vector<u64> packed(images.size());
  for (size_t i = 0; i < images.size(); ++i) packed[i] = ctx.enc(images[i]);
  return packed;
}

u64 packed_apply(u64 x, const std::vector<u64>& images) {
  u64 r = 0;
  while (x != 0) {
    r ^= images[static_cast<unsigned>(__builtin_ctzll(x))];
    x &= x - 1;
  }
  return r;
}

}  // namespace

int criterion_e(u64 q) {
  switch (q % 3) {
    case 1: return 1;
    case 2: return -1;
    default: throw std::domain_error("q divisible by 3 has no residue e");
  }
}

GcdDetails criterion_gcds(const PentanomialSpec& spec) {
  GcdDetails g;
  g.gcd_r_qminus1 = gcd_u128(spec.r, spec.q - 1);
  if (spec.theorem == Theorem::T1) {
    const int e = criterion_e(spec.q);
    const u64 qe = (e == 1) ? spec.q + 1 : spec.q - 1;
    g.gcd_exponent = gcd_u128(spec.exp_sum(), qe);
  } else {
    const u128 qs = checked_add_u128(spec.Q, spec.S);
    const u128 diff = qs >= spec.R ? qs - spec.R : spec.R - qs;
    g.gcd_exponent = gcd_u128(diff, spec.q + 1);
  }
  return g;
}

bool criterion_t1(const PentanomialSpec& spec) {
  if (spec.theorem != Theorem::T1)
    throw std::invalid_argument("criterion_t1 requires a family-1 spec");
  const GcdDetails g = criterion_gcds(spec);
  return g.gcd_r_qminus1 == 1 && g.gcd_exponent == 1;
}

bool criterion_t2(const PentanomialSpec& spec) {
  if (spec.theorem != Theorem::T2)
    throw std::invalid_argument("criterion_t2 requires a family-2 spec");
  if (spec.q % 3 != 1) return false;
  const GcdDetails g = criterion_gcds(spec);
  return g.gcd_r_qminus1 == 1 && g.gcd_exponent == 1;
}

bool criterion_holds(const PentanomialSpec& spec) {
  return spec.theorem == Theorem::T1 ? criterion_t1(spec) : criterion_t2(spec);
}

bool brute_force_permutes(const SparsePoly& f, const ExtFieldCtx& ctx,
                          const OracleOptions& opts) {
  const u64 q2 = ctx.q2();
  if (q2 > opts.domain_cap)
    throw limits_error("oracle domain q^2 exceeds the configured cap");

  OracleOptions::Strategy strategy = opts.strategy;
  if (strategy == OracleOptions::Strategy::kAuto)
    strategy = q2 >= (1ull << 16) ? OracleOptions::Strategy::kWalk
                                  : OracleOptions::Strategy::kDirect;
  unsigned workers = std::max(1u, opts.workers);
  if (q2 < (1ull << 14)) workers = 1;

  const std::vector<GenericTerm> terms = snapshot_terms(f);
  std::vector<BitSet> parts;
  parts.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) parts.emplace_back(q2);
  std::atomic<bool> dup{false};

  const bool packed = ctx.p() == 2;
  Gf2Packed gf;
  std::vector<std::pair<u128, u64>> packed_terms;
  if (packed) {
    gf = Gf2Packed::from(ctx);
    for (const GenericTerm& t : terms)
      packed_terms.emplace_back(t.e, ctx.enc(t.c));
  }

  if (strategy == OracleOptions::Strategy::kDirect) {
    run_partitions(workers, q2, [&](unsigned w, u64 lo, u64 hi) {
      if (packed) {
        for (u64 v = lo; v < hi; ++v) {
          u64 img = 0;
          for (const auto& [e, c] : packed_terms) img ^= gf.mul(c, gf.pow(v, e));
          if (parts[w].test_and_set(img) || dup.load(std::memory_order_relaxed)) {
            dup.store(true, std::memory_order_relaxed);
            return;
          }
        }
      } else {
        ExtElem x = ctx.dec(lo);
        for (u64 v = lo; v < hi; ++v) {
          const ExtElem img = eval_terms(terms, x, ctx);
          if (parts[w].test_and_set(ctx.enc(img)) ||
              dup.load(std::memory_order_relaxed)) {
            dup.store(true, std::memory_order_relaxed);
            return;
          }
          odometer_next(x, ctx.p(), ctx.n());
        }
      }
    });
  } else {
    // Multiplicative walk: x runs through g^0, g^1, ... and each term value
    // advances by one multiplication per point. Covers every nonzero element
    // exactly once; a non-generator would surface as an occupancy duplicate.
    const u64 m = q2 - 1;
    const std::vector<u64> primes = distinct_prime_factors(m);
    // The zero point: f(0) is the constant term.
    ExtElem f0 = ctx.zero();
    for (const GenericTerm& t : terms)
      if (t.e == 0) f0 = t.c;
    parts[0].test_and_set(ctx.enc(f0));

    if (packed) {
      const u64 g = ctx.enc(find_generator(ctx, primes, m));
      run_partitions(workers, m, [&](unsigned w, u64 lo, u64 hi) {
        const size_t nt = packed_terms.size();
        u64 value[8], step[8];
        for (size_t t = 0; t < nt; ++t) {
          const u64 em = static_cast<u64>(packed_terms[t].first % m);
          const u64 start = static_cast<u64>(static_cast<u128>(em) * lo % m);
          value[t] = gf.mul(packed_terms[t].second, gf.pow(g, start));
          step[t] = gf.pow(g, em);
        }
        for (u64 i = lo; i < hi; ++i) {
          u64 img = 0;
          for (size_t t = 0; t < nt; ++t) img ^= value[t];
          if (parts[w].test_and_set(img) ||
              dup.load(std::memory_order_relaxed)) {
            dup.store(true, std::memory_order_relaxed);
            return;
          }
          for (size_t t = 0; t < nt; ++t) value[t] = gf.mul(value[t], step[t]);
        }
      });
    } else {
      const ExtElem g = find_generator(ctx, primes, m);
      run_partitions(workers, m, [&](unsigned w, u64 lo, u64 hi) {
        const size_t nt = terms.size();
        std::vector<ExtElem> value(nt), step(nt);
        for (size_t t = 0; t < nt; ++t) {
          const u64 em = static_cast<u64>(terms[t].e % m);
          const u64 start = static_cast<u64>(static_cast<u128>(em) * lo % m);
          value[t] = ctx.mul(terms[t].c, ctx.pow(g, start));
          step[t] = ctx.pow(g, em);
        }
        for (u64 i = lo; i < hi; ++i) {
          ExtElem img = ctx.zero();
          for (size_t t = 0; t < nt; ++t) img = ctx.add(img, value[t]);
          if (parts[w].test_and_set(ctx.enc(img)) ||
              dup.load(std::memory_order_relaxed)) {
            dup.store(true, std::memory_order_relaxed);
            return;
          }
          for (size_t t = 0; t < nt; ++t) value[t] = ctx.mul(value[t], step[t]);
        }
      });
    }
  }

  if (dup.load()) return false;
  if (!merge_disjoint(parts)) return false;
  return true;
}

bool mu_reduction_permutes(const PentanomialSpec& spec, const SparsePoly& bz,
                           const ExtFieldCtx& ctx,
                           const std::vector<ExtElem>* mu, u64 domain_cap) {
  ensure_ctx_matches(spec, ctx);
  if (gcd_u128(spec.r, spec.q - 1) != 1) return false;
  std::vector<ExtElem> local_mu;
  if (mu == nullptr) {
    if (ctx.q2() > domain_cap)
      throw limits_error("mu enumeration exceeds the configured cap");
    local_mu = enumerate_mu(ctx);
    mu = &local_mu;
  }
  std::vector<u64> codes(mu->size());
  for (size_t i = 0; i < mu->size(); ++i) codes[i] = ctx.enc((*mu)[i]);
  std::vector<u64> sorted = codes;
  std::sort(sorted.begin(), sorted.end());
  std::vector<bool> seen(sorted.size(), false);

  const u64 rmod = static_cast<u64>(spec.r % (spec.q + 1));
  for (const ExtElem& x : *mu) {
    const ExtElem bx = sparse_eval(bz, x, ctx);
    if (ctx.is_zero(bx)) return false;
    const ExtElem y =
        ctx.mul(ctx.pow(x, rmod), ctx.pow(bx, spec.q - 1));
    const u64 code = ctx.enc(y);
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), code);
    if (it == sorted.end() || *it != code) return false;
    const size_t idx = static_cast<size_t>(it - sorted.begin());
    if (seen[idx]) return false;
    seen[idx] = true;
  }
  return true;
}

namespace {

u64 proj_code(const ExtFieldCtx& ctx, const ProjPoint& pt) {
  return pt.infinite ? ctx.q2() : ctx.enc(pt.v);
}

// Checks that `map` sends `domain` bijectively onto the point set whose
// codes are flagged in `target`, |domain| == popcount(target).
bool maps_bijectively(const ExtFieldCtx& ctx, const MobiusMap& map,
                      const std::vector<ProjPoint>& domain,
                      const std::vector<bool>& target) {
  std::vector<bool> seen(target.size(), false);
  for (const ProjPoint& pt : domain) {
    const u64 code = proj_code(ctx, mobius_eval(ctx, map, pt));
    if (!target[code] || seen[code]) return false;
    seen[code] = true;
  }
  return true;
}

}  // namespace

CubicMapsReport check_cubic_mobius(const ExtFieldCtx& ctx) {
  CubicMapsReport rep;
  rep.q_mod_3 = static_cast<int>(ctx.q() % 3);
  const ExtElem omega = find_omega(ctx);
  const ExtElem one = ctx.one();
  const MobiusMap rho(ctx, one, ctx.neg(omega), ctx.neg(omega), one);
  const MobiusMap eta(ctx, one, omega, omega, one);

  std::vector<ProjPoint> mu_points;
  std::vector<bool> mu_target(ctx.q2() + 1, false);
  for (const ExtElem& x : enumerate_mu(ctx)) {
    mu_points.push_back(ProjPoint::finite(x));
    mu_target[ctx.enc(x)] = true;
  }
  std::vector<ProjPoint> p1fq_points;
  std::vector<bool> p1fq_target(ctx.q2() + 1, false);
  for (const ExtElem& x : enumerate_subfield_q(ctx)) {
    p1fq_points.push_back(ProjPoint::finite(x));
    p1fq_target[ctx.enc(x)] = true;
  }
  p1fq_points.push_back(ProjPoint::at_infinity());
  p1fq_target[ctx.q2()] = true;

  if (rep.q_mod_3 == 1) {
    rep.rho_ok = maps_bijectively(ctx, rho, mu_points, mu_target);
    rep.eta_ok = maps_bijectively(ctx, eta, mu_points, mu_target);
  } else {
    rep.rho_ok = maps_bijectively(ctx, rho, mu_points, p1fq_target) &&
                 maps_bijectively(ctx, rho, p1fq_points, mu_target);
    rep.eta_ok = maps_bijectively(ctx, eta, mu_points, p1fq_target) &&
                 maps_bijectively(ctx, eta, p1fq_points, mu_target);
  }

  rep.inverse_composition_ok = true;
  for (u64 v = 0; v <= ctx.q2(); ++v) {
    const ProjPoint pt = (v == ctx.q2()) ? ProjPoint::at_infinity()
                                         : ProjPoint::finite(ctx.dec(v));
    if (!(mobius_eval(ctx, rho, mobius_eval(ctx, eta, pt)) == pt)) {
      rep.inverse_composition_ok = false;
      break;
    }
  }
  return rep;
}

bool check_deg1mu_lemma(const ExtFieldCtx& ctx) {
  const u64 q2 = ctx.q2();
  std::vector<ExtElem> mu = enumerate_mu(ctx);
  std::vector<bool> mu_target(q2 + 1, false);
  for (const ExtElem& x : mu) mu_target[ctx.enc(x)] = true;
  std::vector<ProjPoint> mu_points;
  for (const ExtElem& x : mu) mu_points.push_back(ProjPoint::finite(x));

  std::vector<u64> norm(q2);
  for (u64 v = 0; v < q2; ++v)
    norm[v] = ctx.enc(ctx.mul(ctx.frobenius_q(ctx.dec(v)), ctx.dec(v)));

  for (u64 va = 0; va < q2; ++va) {
    const ExtElem alpha = ctx.dec(va);
    const ExtElem alpha_q = ctx.frobenius_q(alpha);
    for (u64 vb = 0; vb < q2; ++vb) {
      if (norm[va] == norm[vb]) continue;
      const ExtElem beta = ctx.dec(vb);
      const MobiusMap map(ctx, ctx.frobenius_q(beta), alpha_q, alpha, beta);
      if (!maps_bijectively(ctx, map, mu_points, mu_target)) return false;
    }
  }
  return true;
}

bool check_mu_lemma(const ExtFieldCtx& ctx) {
  std::vector<ExtElem> mu = enumerate_mu(ctx);
  std::vector<ProjPoint> mu_points;
  for (const ExtElem& x : mu) mu_points.push_back(ProjPoint::finite(x));
  std::vector<bool> p1fq_target(ctx.q2() + 1, false);
  for (const ExtElem& x : enumerate_subfield_q(ctx))
    p1fq_target[ctx.enc(x)] = true;
  p1fq_target[ctx.q2()] = true;

  const ExtElem one = ctx.one();
  for (u64 va = 0; va < ctx.q2(); ++va) {
    const ExtElem alpha = ctx.dec(va);
    if (ctx.in_subfield_q(alpha)) continue;
    const ExtElem alpha_q = ctx.frobenius_q(alpha);
    for (const ExtElem& beta : mu) {
      const MobiusMap map(ctx, alpha, ctx.mul(beta, alpha_q), one, beta);
      if (!maps_bijectively(ctx, map, mu_points, p1fq_target)) return false;
    }
  }
  return true;
}

PermutationReport verify_spec(const PentanomialSpec& spec,
                              const ExtFieldCtx& ctx, const ExtElem& omega,
                              const OracleOptions& opts,
                              const std::vector<ExtElem>* mu) {
  ensure_ctx_matches(spec, ctx);
  PermutationReport rep;
  rep.spec = spec;

  const auto t_criterion = Clock::now();
  rep.criterion_verdict = criterion_holds(spec);
  rep.gcds = criterion_gcds(spec);
  rep.e = spec.theorem == Theorem::T1 ? criterion_e(spec.q) : 0;
  rep.criterion_us = elapsed_us(t_criterion);

  const SparsePoly bz = build_bz(spec, ctx, omega);
  rep.bz_props = classify_bz(bz, spec, ctx);
  const SparsePoly f = assemble_f(spec, bz, ctx);

  const auto t_mu = Clock::now();
  try {
    rep.mu_verdict = mu_reduction_permutes(spec, bz, ctx, mu, opts.domain_cap);
  } catch (const limits_error&) {
    rep.skipped_cap = true;
  }
  rep.mu_ms = elapsed_ms(t_mu);

  const auto t_oracle = Clock::now();
  try {
    rep.oracle_verdict = brute_force_permutes(f, ctx, opts);
  } catch (const limits_error&) {
    rep.skipped_cap = true;
  }
  rep.oracle_ms = elapsed_ms(t_oracle);
  return rep;
}

bool PermutationReport::agree() const {
  if (oracle_verdict && *oracle_verdict != criterion_verdict) return false;
  if (mu_verdict && *mu_verdict != criterion_verdict) return false;
  return true;
}

namespace {

// --- decomposition internals -----------------------------------------------

// Value-level operations shared by the generic and the packed (p = 2)
// evaluation paths of the decomposition check.
struct GenericOps {
  const ExtFieldCtx& ctx;
  using V = ExtElem;
  using Images = std::vector<ExtElem>;
  V from(const ExtElem& e) const { return e; }
  V zero() const { return ctx.zero(); }
  V add(const V& a, const V& b) const { return ctx.add(a, b); }
  V sub(const V& a, const V& b) const { return ctx.sub(a, b); }
  V mul(const V& a, const V& b) const { return ctx.mul(a, b); }
  V pow(const V& a, u128 e) const { return ctx.pow(a, e); }
  V apply(const V& x, const Images& img) const {
    return ctx.apply_linear(x, img);
  }
  Images images(const std::vector<ExtElem>& generic) const { return generic; }
  u64 enc(const V& x) const { return ctx.enc(x); }
};

struct PackedOps {
  Gf2Packed gf;
  const ExtFieldCtx& ctx;
  using V = u64;
  using Images = std::vector<u64>;
  V from(const ExtElem& e) const { return ctx.enc(e); }
  V zero() const { return 0; }
  V add(V a, V b) const { return a ^ b; }
  V sub(V a, V b) const { return a ^ b; }
  V mul(V a, V b) const { return gf.mul(a, b); }
  V pow(V a, u128 e) const { return gf.pow(a, e); }
  V apply(V x, const Images& img) const { return packed_apply(x, img); }
  Images images(const std::vector<ExtElem>& generic) const {
    return packed_images(ctx, generic);
  }
  u64 enc(V x) const { return x; }
};

struct DecompositionTables {
  std::vector<ExtElem> jk;            // x -> x^q
  std::vector<ExtElem> ja, jb, jc;    // x -> x^Q, x^R, x^S
  std::vector<ExtElem> jbq;           // x -> x^(qR) (family 2, q = 1 mod 3)
  ExtElem omega, omega2, beta_inv;
  ExtElem c1, c2;                     // pair-to-field scalars (q = 2 mod 3)
};

DecompositionTables make_tables(const PentanomialSpec& spec,
                                const ExtFieldCtx& ctx, const ExtElem& omega) {
  DecompositionTables t;
  t.jk = ctx.frobenius_images(ctx.k());
  t.ja = ctx.frobenius_images(spec.a % ctx.n());
  t.jb = ctx.frobenius_images(spec.b % ctx.n());
  t.jc = ctx.frobenius_images(spec.c % ctx.n());
  t.jbq = ctx.frobenius_images((spec.b + ctx.k()) % ctx.n());
  t.omega = omega;
  t.omega2 = ctx.sqr(omega);
  t.beta_inv = ctx.inv(select_beta(spec, ctx, omega));
  const unsigned sum_mod3 = static_cast<unsigned>(spec.exp_sum() % 3);
  const ExtElem omega_neg_sum =
      ctx.pow(omega, (3 - sum_mod3) % 3);  // omega^-(Q+R+S)
  const ExtElem base = ctx.mul(t.beta_inv, omega_neg_sum);
  const ExtElem minus_omega_base = ctx.neg(ctx.mul(t.omega, base));
  if (spec.z == 1) {
    t.c1 = minus_omega_base;
    t.c2 = base;
  } else {
    t.c1 = base;
    t.c2 = minus_omega_base;
  }
  return t;
}

// Per-point evaluation of rho(g(eta(x))) in either value domain.
template <class Ops>
struct DecompositionEval {
  const Ops& ops;
  const PentanomialSpec& spec;
  typename Ops::Images jk, ja, jb, jc, jbq;
  typename Ops::V omega, omega2, beta_inv, c1, c2;
  bool family1;
  int z;

  DecompositionEval(const Ops& ops, const PentanomialSpec& spec,
                    const DecompositionTables& t)
      : ops(ops), spec(spec), jk(ops.images(t.jk)), ja(ops.images(t.ja)),
        jb(ops.images(t.jb)), jc(ops.images(t.jc)), jbq(ops.images(t.jbq)),
        omega(ops.from(t.omega)), omega2(ops.from(t.omega2)),
        beta_inv(ops.from(t.beta_inv)), c1(ops.from(t.c1)),
        c2(ops.from(t.c2)), family1(spec.theorem == Theorem::T1),
        z(spec.z) {}

  // q = 1 (mod 3): eta(x) = omega*x^q + x on F_{q^2}.
  typename Ops::V eta1(const typename Ops::V& x) const {
    return ops.add(ops.mul(omega, ops.apply(x, jk)), x);
  }
  // g(y) = y^(Q+R+S), or y^(Q+qR+S) for family 2.
  typename Ops::V gmap1(const typename Ops::V& y) const {
    const auto& mid = family1 ? jb : jbq;
    return ops.mul(ops.mul(ops.apply(y, ja), ops.apply(y, mid)),
                   ops.apply(y, jc));
  }
  typename Ops::V rho1(const typename Ops::V& u) const {
    const auto uq = ops.apply(u, jk);
    const auto body = (z == 1) ? ops.sub(u, ops.mul(omega, uq))
                               : ops.sub(uq, ops.mul(omega, u));
    return ops.mul(beta_inv, body);
  }

  // q = 2 (mod 3): eta(x) = (w^2 x + w x^q, w x + w^2 x^q) into F_q x F_q.
  std::pair<typename Ops::V, typename Ops::V> eta2(
      const typename Ops::V& x) const {
    const auto xq = ops.apply(x, jk);
    return {ops.add(ops.mul(omega2, x), ops.mul(omega, xq)),
            ops.add(ops.mul(omega, x), ops.mul(omega2, xq))};
  }
  std::pair<typename Ops::V, typename Ops::V> gmap2(
      const typename Ops::V& y1, const typename Ops::V& y2) const {
    if (family1) {
      auto cube = [&](const typename Ops::V& y) {
        return ops.mul(ops.mul(ops.apply(y, ja), ops.apply(y, jb)),
                       ops.apply(y, jc));
      };
      return {cube(y1), cube(y2)};
    }
    // (y1^(Q+S) y2^R, y1^R y2^(Q+S))
    return {ops.mul(ops.mul(ops.apply(y1, ja), ops.apply(y1, jc)),
                    ops.apply(y2, jb)),
            ops.mul(ops.apply(y1, jb),
                    ops.mul(ops.apply(y2, ja), ops.apply(y2, jc)))};
  }
  typename Ops::V rho2(const typename Ops::V& u,
                       const typename Ops::V& v) const {
    return ops.add(ops.mul(c1, u), ops.mul(c2, v));
  }

  typename Ops::V rhs(const typename Ops::V& x, bool branch_q1) const {
    if (branch_q1) return rho1(gmap1(eta1(x)));
    const auto [y1, y2] = eta2(x);
    const auto [g1, g2] = gmap2(y1, y2);
    return rho2(g1, g2);
  }
};

// Exhaustive scan for one spec: pointwise equality f(x) == rhs(x) plus the
// eta image occupancy. Returns {pointwise_ok, eta_injective}.
template <class Ops>
std::pair<bool, bool> exhaustive_decomposition_scan(
    const Ops& ops, const ExtFieldCtx& ctx, const PentanomialSpec& spec,
    const DecompositionEval<Ops>& ev, const SparsePoly& f, bool branch_q1,
    const std::vector<u32_fake_placeholder>* = nullptr);

}  // namespace
}  // namespace permpenta
