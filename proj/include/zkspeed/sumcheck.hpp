#pragma once

// Unified SumCheck engine for the three HyperPlonk compositions (ZeroCheck,
// PermCheck, OpenCheck): shared per-operand evaluation at the integer nodes
// 0..d, term products at each term's natural point count, barycentric
// extension of lower-degree terms, the multi-round prover loop, and a
// round-checking verifier.
//
// Round messages carry evaluations at 0..d rather than coefficients; the
// verifier evaluates them barycentrically.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zkspeed/mle.hpp"
#include "zkspeed/transcript.hpp"

namespace zkspeed::sumcheck {

using fp::FieldConfig;
using fp::FieldElement;
using mle::MleTable;

struct SumCheckError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class CompositionKind { zero_check, perm_check, open_check };

struct Term {
  int sign = 1;                    // +1 or -1
  bool has_alpha = false;          // challenge multiplier
  std::vector<std::size_t> slots;  // operand slot ids, one per factor

  std::uint32_t degree() const { return (std::uint32_t)slots.size(); }
};

struct Composition {
  CompositionKind kind;
  std::size_t num_slots = 0;
  std::vector<Term> terms;
  FieldElement alpha;          // bound for perm_check
  std::uint32_t max_degree = 0;

  // Eq. f_zero: qL*w1*fz + qR*w2*fz + qM*w1*w2*fz - qO*w3*fz + qc*fz
  // slots: 0 qL, 1 qR, 2 qM, 3 qO, 4 qc, 5 w1, 6 w2, 7 w3, 8 fz1
  static Composition zero_check() {
    Composition c;
    c.kind = CompositionKind::zero_check;
    c.num_slots = 9;
    c.terms = {{+1, false, {0, 5, 8}}, {+1, false, {1, 6, 8}},
               {+1, false, {2, 5, 6, 8}}, {-1, false, {3, 7, 8}},
               {+1, false, {4, 8}}};
    c.finish();
    return c;
  }

  // f_perm: pi*fz - p1*p2*fz + a*(phi*D0*D1*D2)*fz - a*(N0*N1*N2)*fz
  // slots: 0 pi, 1 fz2, 2 p1, 3 p2, 4 phi, 5..7 D0..D2, 8..10 N0..N2
  static Composition perm_check(const FieldElement& alpha) {
    Composition c;
    c.kind = CompositionKind::perm_check;
    c.num_slots = 11;
    c.terms = {{+1, false, {0, 1}},
               {-1, false, {2, 3, 1}},
               {+1, true, {4, 5, 6, 7, 1}},
               {-1, true, {8, 9, 10, 1}}};
    c.alpha = alpha;
    c.finish();
    return c;
  }

  // f_open: sum_i y_i * k_i;  slots 0..5 = y, 6..11 = k
  static Composition open_check() {
    Composition c;
    c.kind = CompositionKind::open_check;
    c.num_slots = 12;
    for (std::size_t i = 0; i < 6; ++i)
      c.terms.push_back({+1, false, {i, 6 + i}});
    c.finish();
    return c;
  }

  // highest evaluation node any term containing the slot needs
  std::uint32_t slot_degree(std::size_t slot) const {
    std::uint32_t d = 0;
    for (const auto& t : terms)
      for (auto s : t.slots)
        if (s == slot) d = std::max(d, t.degree());
    return d;
  }

  // fixed per-instance modmul datapath count (evaluation extensions + term
  // products + challenge multipliers)
  std::uint64_t muls_per_instance() const {
    std::uint64_t evals = 0;
    for (std::size_t s = 0; s < num_slots; ++s) {
      std::uint32_t d = slot_degree(s);
      if (d >= 2) evals += d - 1;
    }
    std::uint64_t prods = 0;
    for (const auto& t : terms)
      prods += (std::uint64_t)(t.degree() - 1 + (t.has_alpha ? 1 : 0)) *
               (t.degree() + 1);
    return evals + prods;
  }

  // evaluate the composition given one value per slot
  FieldElement evaluate_values(const std::vector<FieldElement>& v) const {
    if (v.size() != num_slots) throw SumCheckError("value count mismatch");
    auto acc = FieldElement::zero(v[0].config());
    for (const auto& t : terms) {
      auto prod = v[t.slots[0]];
      for (std::size_t i = 1; i < t.slots.size(); ++i) prod *= v[t.slots[i]];
      if (t.has_alpha) prod *= alpha;
      if (t.sign > 0) acc += prod;
      else acc -= prod;
    }
    return acc;
  }

 private:
  void finish() {
    for (const auto& t : terms) max_degree = std::max(max_degree, t.degree());
  }
};

struct RoundMessage {
  std::vector<FieldElement> evals;  // g(0), g(1), ..., g(d)
};

struct SumCheckProof {
  FieldElement claimed_sum;
  std::vector<RoundMessage> rounds;
  std::vector<FieldElement> final_evals;  // per-slot values after all rounds
};

// ---------------------------------------------------------------------------
// Lagrange machinery for consecutive integer nodes 0..k-1.  Coefficients are
// precomputed per config; their setup inversions stay outside instrumented
// regions (ModmulPause).
// ---------------------------------------------------------------------------

class LagrangeBasis {
 public:
  explicit LagrangeBasis(const FieldConfig& cfg) : cfg_(&cfg) {}

  // coefficients c_i with p(x) = sum_i c_i * p(i), nodes 0..k-1, integer x
  const std::vector<FieldElement>& coeffs_at_integer(std::uint32_t k,
                                                     std::uint32_t x) {
    auto key = std::make_pair(k, x);
    auto it = integer_cache_.find(key);
    if (it != integer_cache_.end()) return it->second;
    fp::ModmulPause pause;
    std::vector<FieldElement> cs;
    auto fx = FieldElement::from_u64(*cfg_, x);
    for (std::uint32_t i = 0; i < k; ++i) {
      auto num = FieldElement::one(*cfg_);
      auto den = FieldElement::one(*cfg_);
      auto fi = FieldElement::from_u64(*cfg_, i);
      for (std::uint32_t j = 0; j < k; ++j) {
        if (j == i) continue;
        auto fj = FieldElement::from_u64(*cfg_, j);
        num *= fx - fj;
        den *= fi - fj;
      }
      cs.push_back(num * fp::mod_inv_beea(den));
    }
    return integer_cache_.emplace(key, std::move(cs)).first->second;
  }

  // evaluate p (values at nodes 0..k-1) at an arbitrary field point r
  FieldElement evaluate_at(const std::vector<FieldElement>& values,
                           const FieldElement& r) {
    const std::uint32_t k = (std::uint32_t)values.size();
    // node hit: direct return
    for (std::uint32_t i = 0; i < k; ++i)
      if (r == FieldElement::from_u64(*cfg_, i)) return values[i];
    fp::ModmulPause pause;
    std::vector<FieldElement> diffs;
    for (std::uint32_t i = 0; i < k; ++i)
      diffs.push_back(r - FieldElement::from_u64(*cfg_, i));
    auto inv = fp::batch_inverse(diffs);
    auto n_of_r = FieldElement::one(*cfg_);
    for (auto& d : diffs) n_of_r *= d;
    auto acc = FieldElement::zero(*cfg_);
    const auto& w = barycentric_weights(k);
    for (std::uint32_t i = 0; i < k; ++i) acc += w[i] * inv[i] * values[i];
    return n_of_r * acc;
  }

 private:
  const std::vector<FieldElement>& barycentric_weights(std::uint32_t k) {
    auto it = weight_cache_.find(k);
    if (it != weight_cache_.end()) return it->second;
    std::vector<FieldElement> w;
    for (std::uint32_t i = 0; i < k; ++i) {
      auto den = FieldElement::one(*cfg_);
      auto fi = FieldElement::from_u64(*cfg_, i);
      for (std::uint32_t j = 0; j < k; ++j) {
        if (j == i) continue;
        den *= fi - FieldElement::from_u64(*cfg_, j);
      }
      w.push_back(fp::mod_inv_beea(den));
    }
    return weight_cache_.emplace(k, std::move(w)).first->second;
  }

  struct PairHash {
    std::size_t operator()(const std::pair<std::uint32_t, std::uint32_t>& p) const {
      return std::hash<std::uint64_t>()(((std::uint64_t)p.first << 32) | p.second);
    }
  };
  const FieldConfig* cfg_;
  std::unordered_map<std::pair<std::uint32_t, std::uint32_t>,
                     std::vector<FieldElement>, PairHash>
      integer_cache_;
  std::unordered_map<std::uint32_t, std::vector<FieldElement>> weight_cache_;
};

// Extends evaluations at nodes 0..d' to nodes 0..target_points-1 of the same
// degree-<=d' polynomial.  (d'+1) modmuls per added point.
inline std::vector<FieldElement> barycentric_extend(
    const std::vector<FieldElement>& evals, std::size_t target_points,
    LagrangeBasis& basis) {
  if (evals.empty()) throw SumCheckError("no evaluations to extend");
  if (target_points < evals.size())
    throw SumCheckError("target below the polynomial's own node count");
  std::vector<FieldElement> out = evals;
  const std::uint32_t k = (std::uint32_t)evals.size();
  for (std::uint32_t x = k; x < target_points; ++x) {
    const auto& cs = basis.coeffs_at_integer(k, x);
    auto acc = FieldElement::zero(evals[0].config());
    for (std::uint32_t i = 0; i < k; ++i) acc += cs[i] * evals[i];
    out.push_back(acc);
  }
  return out;
}

// ---------------------------------------------------------------------------
// round_evals: one SumCheck round over the bound tables.
// ---------------------------------------------------------------------------

inline RoundMessage round_evals(const Composition& comp,
                                const std::vector<MleTable>& tables,
                                LagrangeBasis& basis) {
  if (tables.size() != comp.num_slots)
    throw SumCheckError("unbound operand slot");
  const std::uint32_t mu = tables[0].num_vars;
  if (mu < 1) throw SumCheckError("tables must have at least one variable");
  for (const auto& t : tables)
    if (t.num_vars != mu) throw SumCheckError("operand table size mismatch");

  const FieldConfig& cfg = tables[0][0].config();
  const std::uint32_t d = comp.max_degree;
  const std::size_t instances = tables[0].size() / 2;

  // per-slot node targets and small-integer constants 2..d
  std::vector<std::uint32_t> slot_deg(comp.num_slots);
  for (std::size_t s = 0; s < comp.num_slots; ++s)
    slot_deg[s] = comp.slot_degree(s);
  std::vector<FieldElement> node_consts;
  {
    fp::ModmulPause pause;
    for (std::uint32_t e = 0; e <= d; ++e)
      node_consts.push_back(FieldElement::from_u64(cfg, e));
  }

  // per-term accumulators at the term's natural node count
  std::vector<std::vector<FieldElement>> term_acc(comp.terms.size());
  for (std::size_t t = 0; t < comp.terms.size(); ++t)
    term_acc[t].assign(comp.terms[t].degree() + 1, FieldElement::zero(cfg));

  std::vector<std::vector<FieldElement>> evals(comp.num_slots);
  for (std::size_t s = 0; s < comp.num_slots; ++s)
    evals[s].assign(slot_deg[s] + 1, FieldElement::zero(cfg));

  for (std::size_t i = 0; i < instances; ++i) {
    // shared per-operand evaluations at 0..slot_deg
    for (std::size_t s = 0; s < comp.num_slots; ++s) {
      const auto& t0 = tables[s][2 * i];
      const auto& t1 = tables[s][2 * i + 1];
      evals[s][0] = t0;
      if (slot_deg[s] >= 1) evals[s][1] = t1;
      if (slot_deg[s] >= 2) {
        auto delta = t1 - t0;
        for (std::uint32_t e = 2; e <= slot_deg[s]; ++e)
          evals[s][e] = delta * node_consts[e] + t0;
      }
    }
    // term products at the term's own nodes, alpha folded per product
    for (std::size_t t = 0; t < comp.terms.size(); ++t) {
      const auto& term = comp.terms[t];
      for (std::uint32_t e = 0; e <= term.degree(); ++e) {
        auto prod = evals[term.slots[0]][e];
        for (std::size_t f = 1; f < term.slots.size(); ++f)
          prod *= evals[term.slots[f]][e];
        if (term.has_alpha) prod *= comp.alpha;
        if (term.sign > 0) term_acc[t][e] += prod;
        else term_acc[t][e] -= prod;
      }
    }
  }

  // degree balancing: extend every term aggregate to d+1 nodes, then sum
  RoundMessage msg;
  msg.evals.assign(d + 1, FieldElement::zero(cfg));
  for (std::size_t t = 0; t < comp.terms.size(); ++t) {
    auto full = barycentric_extend(term_acc[t], d + 1, basis);
    for (std::uint32_t e = 0; e <= d; ++e) msg.evals[e] += full[e];
  }
  return msg;
}

// ---------------------------------------------------------------------------
// prove / verify
// ---------------------------------------------------------------------------

struct ProveStats {
  std::uint64_t round_muls = 0;   // SumCheck round computation
  std::uint64_t update_muls = 0;  // MLE table updates between rounds
};

inline SumCheckProof prove(const Composition& comp, std::vector<MleTable> tables,
                           transcript::Transcript& tr,
                           const std::string& label_prefix,
                           std::vector<FieldElement>* challenges_out = nullptr,
                           ProveStats* stats = nullptr) {
  if (tables.size() != comp.num_slots)
    throw SumCheckError("unbound operand slot");
  const std::uint32_t mu = tables[0].num_vars;
  if (mu < 1) throw SumCheckError("need at least one variable");
  const FieldConfig& cfg = tables[0][0].config();
  LagrangeBasis basis(cfg);
  // warm the coefficient caches outside any instrumentation scope
  for (const auto& term : comp.terms)
    for (std::uint32_t x = term.degree() + 1; x <= comp.max_degree; ++x)
      basis.coeffs_at_integer(term.degree() + 1, x);

  SumCheckProof proof;
  std::vector<FieldElement> challenges;

  for (std::uint32_t round = 0; round < mu; ++round) {
    RoundMessage msg;
    {
      fp::ModmulCounter c;
      fp::ModmulScope scope(c);
      msg = round_evals(comp, tables, basis);
      if (stats) stats->round_muls += c.count;
    }
    if (round == 0) {
      proof.claimed_sum = msg.evals[0] + msg.evals[1];
      tr.absorb_field(label_prefix + "/sum", proof.claimed_sum);
    }
    tr.absorb_fields(label_prefix + "/round", msg.evals);
    auto r = tr.challenge(label_prefix + "/challenge", cfg);
    challenges.push_back(r);
    proof.rounds.push_back(msg);
    {
      fp::ModmulCounter c;
      fp::ModmulScope scope(c);
      for (auto& t : tables) t = mle::fix_variable(t, r);
      if (stats) stats->update_muls += c.count;
    }
  }

  for (const auto& t : tables) proof.final_evals.push_back(t[0]);
  if (challenges_out) *challenges_out = challenges;
  return proof;
}

enum class VerifyCode {
  ok,
  round_count,
  sum_check,       // g_j(0)+g_j(1) != previous claim
  final_check,     // composition(final oracle) != g_mu(r_mu)
};

struct VerifyResult {
  bool ok = false;
  VerifyCode code = VerifyCode::ok;
  std::uint32_t round = 0;  // 1-based failing round, 0 if structural

  static VerifyResult pass() { return {true, VerifyCode::ok, 0}; }
  static VerifyResult fail(VerifyCode c, std::uint32_t r) { return {false, c, r}; }
};

// final_oracle: given the full challenge vector, per-slot operand values.
using FinalOracle =
    std::function<std::vector<FieldElement>(const std::vector<FieldElement>&)>;

inline VerifyResult verify(const SumCheckProof& proof, const Composition& comp,
                           std::uint32_t mu, const FieldConfig& cfg,
                           transcript::Transcript& tr,
                           const std::string& label_prefix,
                           const FinalOracle& final_oracle,
                           std::vector<FieldElement>* challenges_out = nullptr) {
  if (proof.rounds.size() != mu)
    return VerifyResult::fail(VerifyCode::round_count, 0);
  LagrangeBasis basis(cfg);

  // The full transcript walk runs regardless of early check failures so a
  // caller replaying a larger protocol stays byte-aligned.
  FieldElement expected = proof.claimed_sum;
  std::vector<FieldElement> challenges;
  FieldElement last_eval;
  VerifyResult result = VerifyResult::pass();
  for (std::uint32_t j = 0; j < mu; ++j) {
    const auto& msg = proof.rounds[j];
    if (msg.evals.size() != comp.max_degree + 1)
      return VerifyResult::fail(VerifyCode::round_count, j + 1);
    if (j == 0) tr.absorb_field(label_prefix + "/sum", proof.claimed_sum);
    if (result.ok && msg.evals[0] + msg.evals[1] != expected)
      result = VerifyResult::fail(VerifyCode::sum_check, j + 1);
    tr.absorb_fields(label_prefix + "/round", msg.evals);
    auto r = tr.challenge(label_prefix + "/challenge", cfg);
    challenges.push_back(r);
    last_eval = basis.evaluate_at(msg.evals, r);
    expected = last_eval;
  }
  if (challenges_out) *challenges_out = challenges;
  if (!result.ok) return result;

  auto finals = final_oracle(challenges);
  if (comp.evaluate_values(finals) != last_eval)
    return VerifyResult::fail(VerifyCode::final_check, mu);
  return VerifyResult::pass();
}

}  // namespace zkspeed::sumcheck
