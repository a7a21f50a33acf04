#ifndef PERMPENTA_VERIFY_HPP
#define PERMPENTA_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permpenta/pentanomial.hpp"

namespace permpenta {

/// Default ceiling on q^2 for exhaustive oracles; overridable per call and,
/// in the CLI, through PERMPENTA_ORACLE_CAP.
inline constexpr u64 kDefaultOracleCap = u64(1) << 24;

struct OracleOptions {
  u64 domain_cap = kDefaultOracleCap;
  /// kDirect evaluates every term at every point by square-and-multiply.
  /// kWalk enumerates the multiplicative group through a generator and
  /// advances each term incrementally; same exhaustive verdict, used by
  /// default on large domains. Cross-checked against kDirect in tests.
  enum class Strategy { kAuto, kDirect, kWalk } strategy = Strategy::kAuto;
  unsigned workers = 1;
};

/// Exhaustively decides whether f permutes F_{q^2} by evaluating it at every
/// element and checking the image for duplicates in an occupancy table
/// indexed by the canonical element encoding. Throws limits_error when q^2
/// exceeds the domain cap.
bool brute_force_permutes(const SparsePoly& f, const ExtFieldCtx& ctx,
                          const OracleOptions& opts = {});

/// gcd(r, q-1) = 1 and x -> x^r B_z(x)^(q-1) bijective on mu_{q+1}; a root
/// of B_z on mu_{q+1} makes the verdict false. Pass a precomputed mu list to
/// avoid rescanning the field.
bool mu_reduction_permutes(const PentanomialSpec& spec, const SparsePoly& bz,
                           const ExtFieldCtx& ctx,
                           const std::vector<ExtElem>* mu = nullptr,
                           u64 domain_cap = kDefaultOracleCap);

/// The unique e in {1,-1} with q = e (mod 3); requires q not divisible by 3.
int criterion_e(u64 q);

struct GcdDetails {
  u128 gcd_r_qminus1 = 0;
  /// gcd(Q+R+S, q+e) for family 1, gcd(|Q-R+S|, q+1) for family 2.
  u128 gcd_exponent = 0;
};

GcdDetails criterion_gcds(const PentanomialSpec& spec);

/// Family-1 test: gcd(r, q-1) = 1 = gcd(Q+R+S, q+e).
bool criterion_t1(const PentanomialSpec& spec);
/// Family-2 test: q = 1 (mod 3) and gcd(r, q-1) = 1 = gcd(|Q-R+S|, q+1),
/// with gcd(0, n) = n.
bool criterion_t2(const PentanomialSpec& spec);
bool criterion_holds(const PentanomialSpec& spec);

/// Verdicts and diagnostics for one spec. Present verdicts must agree; a
/// disagreement is a falsification, surfaced by agree() and the sweep.
struct PermutationReport {
  PentanomialSpec spec;
  bool criterion_verdict = false;
  std::optional<bool> oracle_verdict;
  std::optional<bool> mu_verdict;
  int e = 0;  // family 1 only
  GcdDetails gcds;
  BzProperties bz_props;
  bool skipped_cap = false;
  std::int64_t criterion_us = 0;
  std::int64_t oracle_ms = 0;
  std::int64_t mu_ms = 0;

  bool agree() const;
};

PermutationReport verify_spec(const PentanomialSpec& spec,
                              const ExtFieldCtx& ctx, const ExtElem& omega,
                              const OracleOptions& opts = {},
                              const std::vector<ExtElem>* mu = nullptr);

/// Behavior of the order-3 Moebius pair rho = (X-w)/(-wX+1) and
/// eta = (X+w)/(wX+1): both permute mu_{q+1} when q = 1 (mod 3), both
/// interchange mu_{q+1} and P^1(F_q) when q = 2 (mod 3), and they are
/// inverse to each other on the whole projective line.
struct CubicMapsReport {
  int q_mod_3 = 0;
  bool rho_ok = false;
  bool eta_ok = false;
  bool inverse_composition_ok = false;
  bool ok() const { return rho_ok && eta_ok && inverse_composition_ok; }
};

CubicMapsReport check_cubic_mobius(const ExtFieldCtx& ctx);

/// (b^q X + a^q)/(aX + b) permutes mu_{q+1} for every pair with
/// a^(q+1) != b^(q+1), checked over all pairs.
bool check_deg1mu_lemma(const ExtFieldCtx& ctx);

/// (aX + b*a^q)/(X + b) maps mu_{q+1} bijectively onto P^1(F_q) for every
/// a outside F_q and b in mu_{q+1}, checked over all pairs.
bool check_mu_lemma(const ExtFieldCtx& ctx);

struct DecompositionOptions {
  u64 domain_cap = kDefaultOracleCap;
  u64 sample_size = 10000;
  u64 seed = 0;
  unsigned workers = 1;
};

struct DecompositionReport {
  int q_mod_3 = 0;
  bool exhaustive = true;
  u64 seed = 0;
  u64 sample_size = 0;
  u64 points_checked = 0;
  u64 points_total = 0;
  bool pointwise_ok = false;
  bool eta_linear = false;
  bool eta_bijective = false;
  bool rho_linear = false;
  bool rho_bijective = false;
  std::string eta_desc, g_desc, rho_desc;

  bool ok() const {
    return pointwise_ok && eta_linear && eta_bijective && rho_linear &&
           rho_bijective;
  }
};

/// Checks f = rho . g . eta pointwise for the spec (which must have
/// r = Q+R+S), along with linearity and bijectivity of eta and rho.
/// Exhaustive when q^2 fits the cap, otherwise a seeded deterministic
/// sample; bijectivity falls back to the nondegeneracy conditions then.
DecompositionReport verify_decomposition(const PentanomialSpec& spec,
                                         const ExtFieldCtx& ctx,
                                         const ExtElem& omega,
                                         const DecompositionOptions& opts = {});

struct SweepOptions {
  std::vector<u64> primes{2, 5, 7, 13};
  u64 q2_limit = u64(1) << 20;
  int imax = 3;
  std::vector<unsigned> r_steps{0, 1};  // r = Q+R+S + step*(q+1)
  OracleOptions oracle;
  unsigned workers = 1;
  bool conjugate_omega = false;
};

struct SweepResult {
  std::vector<PermutationReport> reports;
  u64 checked = 0;
  u64 skipped = 0;
  u64 disagreements = 0;
  u64 permutations = 0;
};

/// Runs criterion, mu-reduction, and brute-force verdicts over the whole
/// parameter grid; reports are in deterministic grid order regardless of
/// worker count.
SweepResult run_sweep(const SweepOptions& opts);

/// Fields (p, k) with p^(2k) <= q2_limit, in grid order.
std::vector<std::pair<u64, unsigned>> sweep_fields(
    const std::vector<u64>& primes, u64 q2_limit);

}  // namespace permpenta

#endif  // PERMPENTA_VERIFY_HPP
