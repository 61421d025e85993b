#pragma once

// End-to-end HyperPlonk prover orchestration: witness commitments, the Gate
// Identity ZeroCheck, the Wiring Identity (construct N&D -> FracMLE ->
// ProdMLE -> commitments -> PermCheck), batch evaluation, polynomial opening
// with the halving MSM ladder, and the internal self-verifier.
//
// All challenges flow through one SHA3-256 transcript with a fixed absorb
// schedule; identical inputs give byte-identical proof bundles.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zkspeed/circuit.hpp"
#include "zkspeed/mle.hpp"
#include "zkspeed/msm.hpp"
#include "zkspeed/permwire.hpp"
#include "zkspeed/sumcheck.hpp"
#include "zkspeed/transcript.hpp"

namespace zkspeed::prover {

using circuit::MockCircuit;
using ec::CurveConfig;
using ec::CurvePoint;
using fp::FieldConfig;
using fp::FieldElement;
using mle::MleTable;
using transcript::Transcript;

struct ProverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// fixed MSM window sizes per protocol step (clamped to the scalar width)
inline constexpr std::uint32_t kWitnessWindow = 10;
inline constexpr std::uint32_t kWireWindow = 6;
inline constexpr std::uint32_t kOpenWindow = 4;

inline std::uint32_t clamp_window(std::uint32_t w, const FieldConfig& sf) {
  return w > sf.bit_width ? sf.bit_width : w;
}

// ---------------------------------------------------------------------------
// Commitment bases: a deterministic point walk, batch-normalized to Z = 1.
// ---------------------------------------------------------------------------

struct Srs {
  std::vector<CurvePoint> bases;
};

inline Srs gen_srs(const CurveConfig& curve, std::size_t n, std::uint64_t seed) {
  auto mix = [](std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t s = seed ^ 0x5a17ec5a17ec5a17ULL;
  auto g = ec::generator_point(curve);
  auto step = ec::scalar_mul_u64(mix(s) | 1, g);
  auto cur = ec::scalar_mul_u64(mix(s) | 1, g);
  Srs srs;
  srs.bases.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    srs.bases.push_back(cur);
    cur = ec::padd(cur, step);
  }
  srs.bases = ec::batch_normalize(srs.bases);
  return srs;
}

// ---------------------------------------------------------------------------
// Proof bundle
// ---------------------------------------------------------------------------

struct ProofBundle {
  std::uint32_t mu = 0;
  std::vector<CurvePoint> witness_commits;  // 3
  CurvePoint phi_commit, pi_commit;
  sumcheck::SumCheckProof zero_check, perm_check, open_check;
  std::vector<FieldElement> batch_evals;   // exactly 22
  std::vector<CurvePoint> ladder;          // mu points, sizes 2^(mu-1)..2^0
  sha3::Digest digest{};
};

inline constexpr std::size_t kBatchEvalCount = 22;
inline constexpr std::size_t kBatchEvalTables = 13;
inline constexpr std::size_t kBatchEvalPoints = 6;

// The 22-evaluation schedule: (point id, table id) pairs, fixed and ordered.
// Tables: 0 qL 1 qR 2 qM 3 qO 4 qc 5 w0 6 w1 7 w2 8 s0 9 s1 10 s2 11 phi 12 pi
// Points: 0 = ZeroCheck round challenges, 1 = PermCheck round challenges,
//         2/3 = PermCheck challenges shifted for p1/p2 (prepend 0/1, drop
//         last), 4 = binary address of the product root slot, 5 = origin.
inline const std::vector<std::pair<int, int>>& batch_eval_schedule() {
  static const std::vector<std::pair<int, int>> schedule = {
      {0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {0, 7},
      {1, 5}, {1, 6}, {1, 7}, {1, 8}, {1, 9}, {1, 10}, {1, 11}, {1, 12},
      {2, 11}, {2, 12}, {3, 11}, {3, 12}, {4, 12}, {5, 11}};
  return schedule;
}

// y_i combination subsets (three tables each, successive powers of one
// transcript challenge as coefficients).
inline const std::vector<std::array<int, 3>>& combine_schedule() {
  static const std::vector<std::array<int, 3>> schedule = {
      {0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {9, 10, 11}, {12, 11, 5}, {0, 6, 8}};
  return schedule;
}

namespace detail {

inline std::vector<std::uint8_t> point_bytes(const CurvePoint& p) {
  std::vector<std::uint8_t> out;
  if (p.is_identity()) {
    out.push_back(1);
    return out;
  }
  auto a = ec::to_affine(p);
  out.push_back(0);
  std::size_t nb = a.x.config().canonical_bytes();
  out.resize(1 + 2 * nb);
  a.x.to_bytes_le(out.data() + 1);
  a.y.to_bytes_le(out.data() + 1 + nb);
  return out;
}

inline std::vector<MleTable> circuit_tables(const MockCircuit& c) {
  return {c.q_l, c.q_r, c.q_m, c.q_o, c.q_c, c.w[0], c.w[1], c.w[2],
          c.sigma[0], c.sigma[1], c.sigma[2]};  // phi/pi appended by caller
}

inline std::vector<std::vector<FieldElement>> query_points(
    std::uint32_t mu, const std::vector<FieldElement>& zc_challenges,
    const std::vector<FieldElement>& pc_challenges, const FieldConfig& cfg) {
  auto zero = FieldElement::zero(cfg);
  auto one = FieldElement::one(cfg);
  std::vector<std::vector<FieldElement>> pts(6);
  pts[0] = zc_challenges;
  pts[1] = pc_challenges;
  pts[2] = {zero};
  pts[3] = {one};
  for (std::uint32_t j = 0; j + 1 < mu; ++j) {
    pts[2].push_back(pc_challenges[j]);
    pts[3].push_back(pc_challenges[j]);
  }
  // binary address of pi's root slot 2^mu - 2: (0, 1, 1, ..., 1)
  pts[4].assign(mu, one);
  pts[4][0] = zero;
  pts[5].assign(mu, zero);
  return pts;
}

// ladder MSM over the current g'' table
inline CurvePoint ladder_msm(const MleTable& t, const Srs& srs,
                             const CurveConfig& curve, msm::OpLog* log) {
  msm::MsmInstance inst;
  inst.window_size = clamp_window(kOpenWindow, curve.scalar_field);
  inst.scalars = t.entries;
  inst.points.assign(srs.bases.begin(), srs.bases.begin() + t.size());
  return msm::pippenger(inst, curve, log);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// prove_all
// ---------------------------------------------------------------------------

struct StepStats {
  sumcheck::ProveStats zero_check, perm_check, open_check;
  msm::OpLog witness_msm, wire_msm, open_msm;
};

inline ProofBundle prove_all(const MockCircuit& c, const CurveConfig& curve,
                             const Srs& srs, StepStats* stats = nullptr) {
  const FieldConfig& cfg = curve.scalar_field;
  const std::uint32_t mu = c.mu;
  const std::size_t n = c.gates();
  if (srs.bases.size() < n) throw ProverError("SRS smaller than the circuit");

  Transcript tr;
  ProofBundle bundle;
  bundle.mu = mu;

  // header: protocol version, size, field, curve
  {
    std::vector<std::uint8_t> hdr;
    hdr.push_back(1);  // version
    hdr.push_back((std::uint8_t)mu);
    for (std::size_t i = 0; i < cfg.nlimbs; ++i)
      for (int b = 0; b < 8; ++b)
        hdr.push_back((std::uint8_t)(cfg.modulus[i] >> (8 * b)));
    hdr.insert(hdr.end(), curve.name.begin(), curve.name.end());
    tr.absorb("header", hdr);
  }

  // (1) witness commitments, sparse MSMs
  for (int j = 0; j < 3; ++j) {
    msm::MsmInstance inst;
    inst.window_size = clamp_window(kWitnessWindow, cfg);
    inst.scalars = c.w[j].entries;
    inst.points.assign(srs.bases.begin(), srs.bases.begin() + n);
    auto commit = msm::msm_sparse(inst, msm::tally_scalars(inst.scalars), curve,
                                  stats ? &stats->witness_msm : nullptr);
    bundle.witness_commits.push_back(commit);
    tr.absorb("witness-commit", detail::point_bytes(commit));
  }

  // (2) Gate Identity: ZeroCheck over Eq. 2 with f_z1 built from challenges
  auto r_zc = tr.challenge_vector("zc-r", cfg, mu);
  auto f_z1 = mle::build_eq(r_zc);
  std::vector<FieldElement> zc_challenges;
  {
    auto comp = sumcheck::Composition::zero_check();
    std::vector<MleTable> tables = {c.q_l, c.q_r, c.q_m,  c.q_o, c.q_c,
                                    c.w[0], c.w[1], c.w[2], f_z1.table};
    bundle.zero_check =
        sumcheck::prove(comp, std::move(tables), tr, "zc", &zc_challenges,
                        stats ? &stats->zero_check : nullptr);
  }

  // (3) Wiring Identity
  auto beta = tr.challenge("beta", cfg);
  auto gamma = tr.challenge("gamma", cfg);
  std::optional<permwire::NdOutput> nd;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto candidate = permwire::construct_nd(c.wiring_inputs(beta, gamma));
    bool zero_denom = false;
    for (std::size_t i = 0; i < candidate.d.size() && !zero_denom; ++i)
      zero_denom = candidate.d[i].is_zero();
    if (!zero_denom) {
      nd = std::move(candidate);
      break;
    }
    if (attempt == 1) throw ProverError("zero denominator after resampling");
    beta = tr.challenge("beta", cfg);
    gamma = tr.challenge("gamma", cfg);
  }
  auto phi = permwire::frac_mle(nd->n, nd->d);
  auto ps = permwire::build_product(phi);

  auto commit_dense = [&](const MleTable& t) {
    msm::MsmInstance inst;
    inst.window_size = clamp_window(kWireWindow, cfg);
    inst.scalars = t.entries;
    inst.points.assign(srs.bases.begin(), srs.bases.begin() + t.size());
    return msm::pippenger(inst, curve, stats ? &stats->wire_msm : nullptr);
  };
  bundle.phi_commit = commit_dense(phi);
  bundle.pi_commit = commit_dense(ps.pi);
  tr.absorb("phi-commit", detail::point_bytes(bundle.phi_commit));
  tr.absorb("pi-commit", detail::point_bytes(bundle.pi_commit));

  auto alpha = tr.challenge("alpha", cfg);
  auto r_pc = tr.challenge_vector("pc-r", cfg, mu);
  auto f_z2 = mle::build_eq(r_pc);
  std::vector<FieldElement> pc_challenges;
  {
    auto comp = sumcheck::Composition::perm_check(alpha);
    std::vector<MleTable> tables = {
        ps.pi,  f_z2.table,     ps.p1,          ps.p2,          phi,
        nd->d_parts[0], nd->d_parts[1], nd->d_parts[2], nd->n_parts[0],
        nd->n_parts[1], nd->n_parts[2]};
    bundle.perm_check =
        sumcheck::prove(comp, std::move(tables), tr, "pc", &pc_challenges,
                        stats ? &stats->perm_check : nullptr);
  }

  // (4A) batch evaluation: 22 evaluations of 13 tables at 6 points
  auto tables13 = detail::circuit_tables(c);
  tables13.push_back(phi);
  tables13.push_back(ps.pi);
  auto pts = detail::query_points(mu, zc_challenges, pc_challenges, cfg);
  for (const auto& [pt, tab] : batch_eval_schedule()) {
    auto v = mle::evaluate(tables13[tab], pts[pt]);
    bundle.batch_evals.push_back(v);
    tr.absorb_field("eval", v);
  }

  // (4B) polynomial opening
  auto combine_c = tr.challenge("combine", cfg);
  std::vector<MleTable> ys;
  {
    auto coeff = FieldElement::one(cfg);
    for (const auto& subset : combine_schedule()) {
      std::vector<FieldElement> acc(n, FieldElement::zero(cfg));
      for (int tab : subset) {
        for (std::size_t i = 0; i < n; ++i) acc[i] += coeff * tables13[tab][i];
        coeff *= combine_c;
      }
      ys.emplace_back(mu, std::move(acc));
    }
  }
  std::vector<MleTable> ks;
  for (const auto& pt : pts) ks.push_back(mle::build_eq(pt).table);

  std::vector<FieldElement> oc_challenges;
  {
    auto comp = sumcheck::Composition::open_check();
    std::vector<MleTable> tables = ys;
    tables.insert(tables.end(), ks.begin(), ks.end());
    bundle.open_check =
        sumcheck::prove(comp, std::move(tables), tr, "oc", &oc_challenges,
                        stats ? &stats->open_check : nullptr);
  }

  // g' = sum_i e_i * y_i with e = eq weights over the first OpenCheck
  // challenges (padded from the transcript when mu < 3)
  std::vector<FieldElement> gp_sel(oc_challenges.begin(),
                                   oc_challenges.begin() + std::min<std::size_t>(
                                                               3, oc_challenges.size()));
  while (gp_sel.size() < 3) gp_sel.push_back(tr.challenge("gprime-pad", cfg));
  auto gp_weights = mle::build_eq(gp_sel).table;
  MleTable gprime(mu, std::vector<FieldElement>(n, FieldElement::zero(cfg)));
  for (std::size_t i = 0; i < n; ++i) {
    auto acc = FieldElement::zero(cfg);
    for (std::size_t t = 0; t < ys.size(); ++t) acc += gp_weights[t] * ys[t][i];
    gprime[i] = acc;
  }

  // halve once, then the MSM ladder down to one point
  auto g2 = mle::fix_variable(gprime, tr.challenge("ladder-half", cfg));
  for (std::uint32_t s = mu; s-- > 0;) {
    auto out = detail::ladder_msm(g2, srs, curve,
                                  stats ? &stats->open_msm : nullptr);
    bundle.ladder.push_back(out);
    tr.absorb("ladder-msm", detail::point_bytes(out));
    if (s > 0) g2 = mle::fix_variable(g2, tr.challenge("ladder", cfg));
  }

  bundle.digest = tr.state();
  return bundle;
}

// ---------------------------------------------------------------------------
// self_verify: transcript replay with naive-MSM commitment checks and direct
// MLE evaluation as the SumCheck final oracle.
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(const std::string& name, bool pass) { checks.push_back({name, pass}); }
  bool passed(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c.pass;
    return false;
  }
};

inline VerifyReport self_verify(const ProofBundle& bundle, const MockCircuit& c,
                                const CurveConfig& curve, const Srs& srs) {
  const FieldConfig& cfg = curve.scalar_field;
  const std::uint32_t mu = c.mu;
  const std::size_t n = c.gates();
  VerifyReport report;

  Transcript tr;
  {
    std::vector<std::uint8_t> hdr;
    hdr.push_back(1);
    hdr.push_back((std::uint8_t)mu);
    for (std::size_t i = 0; i < cfg.nlimbs; ++i)
      for (int b = 0; b < 8; ++b)
        hdr.push_back((std::uint8_t)(cfg.modulus[i] >> (8 * b)));
    hdr.insert(hdr.end(), curve.name.begin(), curve.name.end());
    tr.absorb("header", hdr);
  }

  // Witness commitments against the naive oracle.  The replay absorbs the
  // recomputed values, so a tampered bundle field trips exactly its own
  // comparison instead of shifting every downstream challenge.
  bool witness_ok = bundle.witness_commits.size() == 3;
  for (int j = 0; j < 3; ++j) {
    msm::MsmInstance inst;
    inst.window_size = clamp_window(kWitnessWindow, cfg);
    inst.scalars = c.w[j].entries;
    inst.points.assign(srs.bases.begin(), srs.bases.begin() + n);
    auto recomputed = msm::msm_naive(inst, curve);
    if (witness_ok) witness_ok = recomputed == bundle.witness_commits[j];
    tr.absorb("witness-commit", detail::point_bytes(recomputed));
  }
  report.add("witness-commitments", witness_ok);

  // ZeroCheck: claimed sum must be zero, rounds must verify
  auto r_zc = tr.challenge_vector("zc-r", cfg, mu);
  report.add("zerocheck-claim-zero", bundle.zero_check.claimed_sum.is_zero());
  std::vector<FieldElement> zc_rounds;
  {
    auto comp = sumcheck::Composition::zero_check();
    sumcheck::FinalOracle oracle =
        [&](const std::vector<FieldElement>& rs) {
          std::vector<FieldElement> out;
          for (const MleTable* t : {&c.q_l, &c.q_r, &c.q_m, &c.q_o, &c.q_c,
                                    &c.w[0], &c.w[1], &c.w[2]})
            out.push_back(mle::evaluate(*t, rs));
          out.push_back(mle::eq_eval(r_zc, rs));
          return out;
        };
    auto res = sumcheck::verify(bundle.zero_check, comp, mu, cfg, tr, "zc",
                                oracle, &zc_rounds);
    report.add("zerocheck-rounds", res.ok);
  }

  // Wiring identity: reconstruct N/D/phi/pi with the replayed challenges
  auto beta = tr.challenge("beta", cfg);
  auto gamma = tr.challenge("gamma", cfg);
  std::optional<permwire::NdOutput> nd;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto candidate = permwire::construct_nd(c.wiring_inputs(beta, gamma));
    bool zero_denom = false;
    for (std::size_t i = 0; i < candidate.d.size() && !zero_denom; ++i)
      zero_denom = candidate.d[i].is_zero();
    if (!zero_denom) {
      nd = std::move(candidate);
      break;
    }
    if (attempt == 1) {
      report.add("wiring-denominator", false);
      return report;
    }
    beta = tr.challenge("beta", cfg);
    gamma = tr.challenge("gamma", cfg);
  }
  auto phi = permwire::frac_mle(nd->n, nd->d);
  auto ps = permwire::build_product(phi);

  {
    msm::MsmInstance inst;
    inst.window_size = clamp_window(kWireWindow, cfg);
    inst.scalars = phi.entries;
    inst.points.assign(srs.bases.begin(), srs.bases.begin() + n);
    auto phi_re = msm::msm_naive(inst, curve);
    inst.scalars = ps.pi.entries;
    auto pi_re = msm::msm_naive(inst, curve);
    report.add("phi-commitment", phi_re == bundle.phi_commit);
    report.add("pi-commitment", pi_re == bundle.pi_commit);
    tr.absorb("phi-commit", detail::point_bytes(phi_re));
    tr.absorb("pi-commit", detail::point_bytes(pi_re));
  }

  report.add("product-root-unit", ps.pi[ps.root_slot] == FieldElement::one(cfg));

  auto alpha = tr.challenge("alpha", cfg);
  auto r_pc = tr.challenge_vector("pc-r", cfg, mu);
  std::vector<FieldElement> pc_rounds;
  {
    auto comp = sumcheck::Composition::perm_check(alpha);
    report.add("permcheck-claim-zero", bundle.perm_check.claimed_sum.is_zero());
    std::vector<const MleTable*> slot_tables = {
        &ps.pi,          nullptr,         &ps.p1,          &ps.p2, &phi,
        &nd->d_parts[0], &nd->d_parts[1], &nd->d_parts[2], &nd->n_parts[0],
        &nd->n_parts[1], &nd->n_parts[2]};
    sumcheck::FinalOracle oracle = [&](const std::vector<FieldElement>& rs) {
      std::vector<FieldElement> out;
      for (auto* t : slot_tables)
        out.push_back(t ? mle::evaluate(*t, rs) : mle::eq_eval(r_pc, rs));
      return out;
    };
    auto res = sumcheck::verify(bundle.perm_check, comp, mu, cfg, tr, "pc",
                                oracle, &pc_rounds);
    report.add("permcheck-rounds", res.ok);
  }

  // batch evaluations at the six query points
  auto tables13 = detail::circuit_tables(c);
  tables13.push_back(phi);
  tables13.push_back(ps.pi);
  auto pts = detail::query_points(mu, zc_rounds, pc_rounds, cfg);
  bool evals_ok = bundle.batch_evals.size() == kBatchEvalCount;
  {
    std::size_t idx = 0;
    for (const auto& [pt, tab] : batch_eval_schedule()) {
      auto v = mle::evaluate(tables13[tab], pts[pt]);
      if (evals_ok && v != bundle.batch_evals[idx]) evals_ok = false;
      tr.absorb_field("eval", v);
      ++idx;
    }
  }
  report.add("batch-evaluations", evals_ok);

  // polynomial opening
  auto combine_c = tr.challenge("combine", cfg);
  std::vector<MleTable> ys;
  {
    auto coeff = FieldElement::one(cfg);
    for (const auto& subset : combine_schedule()) {
      std::vector<FieldElement> acc(n, FieldElement::zero(cfg));
      for (int tab : subset) {
        for (std::size_t i = 0; i < n; ++i) acc[i] += coeff * tables13[tab][i];
        coeff *= combine_c;
      }
      ys.emplace_back(mu, std::move(acc));
    }
  }
  std::vector<MleTable> ks;
  for (const auto& pt : pts) ks.push_back(mle::build_eq(pt).table);
  std::vector<FieldElement> oc_rounds;
  {
    auto comp = sumcheck::Composition::open_check();
    sumcheck::FinalOracle oracle = [&](const std::vector<FieldElement>& rs) {
      std::vector<FieldElement> out;
      for (const auto& y : ys) out.push_back(mle::evaluate(y, rs));
      for (const auto& pt : pts) out.push_back(mle::eq_eval(pt, rs));
      return out;
    };
    auto res = sumcheck::verify(bundle.open_check, comp, mu, cfg, tr, "oc",
                                oracle, &oc_rounds);
    report.add("opencheck-rounds", res.ok);
  }

  std::vector<FieldElement> gp_sel(
      oc_rounds.begin(),
      oc_rounds.begin() + std::min<std::size_t>(3, oc_rounds.size()));
  while (gp_sel.size() < 3) gp_sel.push_back(tr.challenge("gprime-pad", cfg));
  auto gp_weights = mle::build_eq(gp_sel).table;
  MleTable gprime(mu, std::vector<FieldElement>(n, FieldElement::zero(cfg)));
  for (std::size_t i = 0; i < n; ++i) {
    auto acc = FieldElement::zero(cfg);
    for (std::size_t t = 0; t < ys.size(); ++t) acc += gp_weights[t] * ys[t][i];
    gprime[i] = acc;
  }

  bool ladder_ok = bundle.ladder.size() == mu;
  auto g2 = mle::fix_variable(gprime, tr.challenge("ladder-half", cfg));
  for (std::uint32_t s = mu; s-- > 0;) {
    msm::MsmInstance inst;
    inst.window_size = clamp_window(kOpenWindow, cfg);
    inst.scalars = g2.entries;
    inst.points.assign(srs.bases.begin(), srs.bases.begin() + g2.size());
    auto recomputed = msm::msm_naive(inst, curve);
    if (ladder_ok) ladder_ok = recomputed == bundle.ladder[mu - 1 - s];
    tr.absorb("ladder-msm", detail::point_bytes(recomputed));
    if (s > 0) g2 = mle::fix_variable(g2, tr.challenge("ladder", cfg));
  }
  report.add("opening-ladder", ladder_ok);

  report.add("transcript-digest", tr.state() == bundle.digest);
  return report;
}

// ---------------------------------------------------------------------------
// Bundle serialization: versioned header, length-prefixed little-endian
// canonical scalars, affine points with an infinity flag.
// ---------------------------------------------------------------------------

namespace detail {

struct ByteWriter {
  std::vector<std::uint8_t> buf;
  void u8(std::uint8_t v) { buf.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back((std::uint8_t)(v >> (8 * i)));
  }
  void field(const FieldElement& x) {
    std::size_t nb = x.config().canonical_bytes();
    std::size_t at = buf.size();
    buf.resize(at + nb);
    x.to_bytes_le(buf.data() + at);
  }
  void fields(const std::vector<FieldElement>& xs) {
    u32((std::uint32_t)xs.size());
    for (const auto& x : xs) field(x);
  }
  void point(const CurvePoint& p) {
    auto b = point_bytes(p);
    u8((std::uint8_t)b[0]);
    if (b[0] == 0) buf.insert(buf.end(), b.begin() + 1, b.end());
  }
  void proof(const sumcheck::SumCheckProof& p) {
    field(p.claimed_sum);
    u32((std::uint32_t)p.rounds.size());
    for (const auto& r : p.rounds) fields(r.evals);
    fields(p.final_evals);
  }
};

struct ByteReader {
  const std::uint8_t* data;
  std::size_t len;
  std::size_t at = 0;
  const FieldConfig* scalar;
  const CurveConfig* curve;

  void need(std::size_t n) const {
    if (at + n > len) throw ProverError("truncated proof bundle");
  }
  std::uint8_t u8() {
    need(1);
    return data[at++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= (std::uint32_t)data[at + i] << (8 * i);
    at += 4;
    return v;
  }
  FieldElement field() {
    std::size_t nb = scalar->canonical_bytes();
    need(nb);
    auto v = FieldElement::from_bytes_le(*scalar, data + at);
    at += nb;
    return v;
  }
  std::vector<FieldElement> fields() {
    std::uint32_t n = u32();
    std::vector<FieldElement> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(field());
    return out;
  }
  CurvePoint point() {
    if (u8()) return ec::identity_point(*curve);
    std::size_t nb = curve->base_field.canonical_bytes();
    need(2 * nb);
    auto x = FieldElement::from_bytes_le(curve->base_field, data + at);
    auto y = FieldElement::from_bytes_le(curve->base_field, data + at + nb);
    at += 2 * nb;
    return ec::from_affine(*curve, {x, y, false});
  }
  sumcheck::SumCheckProof proof() {
    sumcheck::SumCheckProof p;
    p.claimed_sum = field();
    std::uint32_t rounds = u32();
    for (std::uint32_t i = 0; i < rounds; ++i) p.rounds.push_back({fields()});
    p.final_evals = fields();
    return p;
  }
};

}  // namespace detail

inline std::vector<std::uint8_t> serialize_bundle(const ProofBundle& b) {
  detail::ByteWriter w;
  w.u8('Z');
  w.u8('K');
  w.u8('P');
  w.u8('B');
  w.u32(1);  // format version
  w.u32(b.mu);
  for (const auto& p : b.witness_commits) w.point(p);
  w.point(b.phi_commit);
  w.point(b.pi_commit);
  w.proof(b.zero_check);
  w.proof(b.perm_check);
  w.proof(b.open_check);
  w.fields(b.batch_evals);
  w.u32((std::uint32_t)b.ladder.size());
  for (const auto& p : b.ladder) w.point(p);
  w.buf.insert(w.buf.end(), b.digest.begin(), b.digest.end());
  return w.buf;
}

inline ProofBundle deserialize_bundle(const std::uint8_t* data, std::size_t len,
                                      const CurveConfig& curve) {
  detail::ByteReader r{data, len, 0, &curve.scalar_field, &curve};
  if (r.u8() != 'Z' || r.u8() != 'K' || r.u8() != 'P' || r.u8() != 'B')
    throw ProverError("bad bundle magic");
  if (r.u32() != 1) throw ProverError("unsupported bundle version");
  ProofBundle b;
  b.mu = r.u32();
  for (int i = 0; i < 3; ++i) b.witness_commits.push_back(r.point());
  b.phi_commit = r.point();
  b.pi_commit = r.point();
  b.zero_check = r.proof();
  b.perm_check = r.proof();
  b.open_check = r.proof();
  b.batch_evals = r.fields();
  std::uint32_t ladder = r.u32();
  for (std::uint32_t i = 0; i < ladder; ++i) b.ladder.push_back(r.point());
  r.need(32);
  std::copy(data + r.at, data + r.at + 32, b.digest.begin());
  r.at += 32;
  return b;
}

}  // namespace zkspeed::prover
