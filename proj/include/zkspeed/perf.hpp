#pragma once

// Hardware performance model: per-unit analytical latency/bandwidth models,
// an event-level MSM cycle model, the batched-inversion size optimizer,
// area/power roll-up anchored to the reference design, and the design-space
// explorer with Pareto extraction.
//
// All latencies are cycles at 1 GHz; bandwidth converts bytes to cycles at
// the design rate (1 GB/s = 1 byte/cycle).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "zkspeed/msm.hpp"
#include "zkspeed/sumcheck.hpp"

namespace zkspeed::perf {

struct PerfError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Design space (Table 2 domains) and cost tables (Table 5 anchors)
// ---------------------------------------------------------------------------

struct DesignPoint {
  std::uint32_t msm_pes = 16;
  std::uint32_t msm_window = 9;
  std::uint32_t msm_points_per_pe = 2048;
  std::uint32_t fracmle_pes = 1;
  std::uint32_t sumcheck_pes = 2;
  std::uint32_t mle_update_pes = 11;
  std::uint32_t modmuls_per_update_pe = 4;
  std::uint32_t bandwidth_gbps = 2048;
};

struct KnobDomains {
  std::vector<std::uint32_t> msm_pes = {1, 2, 4, 8, 16};
  std::vector<std::uint32_t> msm_window = {7, 8, 9, 10};
  std::vector<std::uint32_t> msm_points_per_pe = {1024, 2048, 4096, 8192, 16384};
  std::vector<std::uint32_t> fracmle_pes = {1, 2, 4};
  std::vector<std::uint32_t> sumcheck_pes = {1, 2, 4, 8, 16};
  std::vector<std::uint32_t> mle_update_pes = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::vector<std::uint32_t> modmuls_per_update_pe = {1, 2, 4, 8, 16};
  std::vector<std::uint32_t> bandwidth_gbps = {64,  128,  256, 512,
                                               1024, 2048, 4096};

  std::size_t cross_product_size() const {
    return msm_pes.size() * msm_window.size() * msm_points_per_pe.size() *
           fracmle_pes.size() * sumcheck_pes.size() * mle_update_pes.size() *
           modmuls_per_update_pe.size() * bandwidth_gbps.size();
  }

  bool contains(const DesignPoint& d) const {
    auto in = [](const std::vector<std::uint32_t>& v, std::uint32_t x) {
      return std::find(v.begin(), v.end(), x) != v.end();
    };
    return in(msm_pes, d.msm_pes) && in(msm_window, d.msm_window) &&
           in(msm_points_per_pe, d.msm_points_per_pe) &&
           in(fracmle_pes, d.fracmle_pes) && in(sumcheck_pes, d.sumcheck_pes) &&
           in(mle_update_pes, d.mle_update_pes) &&
           in(modmuls_per_update_pe, d.modmuls_per_update_pe) &&
           in(bandwidth_gbps, d.bandwidth_gbps);
  }
};

// Per-unit area (mm^2) and average power (W) anchors at the reference design
// (16 MSM PEs at W=9/2048 pts, 2 SumCheck PEs, 11 update PEs x 4 modmuls,
// 1 FracMLE PE, 2 TB/s over two HBM3 PHYs), plus model parameters.
struct CostTables {
  // compute blocks
  double msm_area = 105.64, msm_power = 76.19;            // 16 PEs
  double sumcheck_area = 24.96, sumcheck_power = 5.38;    // 2 PEs
  double nd_area = 1.35, nd_power = 0.19;
  double fracmle_area = 1.92, fracmle_power = 0.25;       // 1 PE
  double combine_area = 9.56, combine_power = 0.34;
  double update_area = 5.84, update_power = 1.13;         // 11 PEs x 4 muls
  double tree_area = 12.28, tree_power = 4.16;
  double other_area = 1.98, other_power = 0.04;
  // memory
  double sram_area = 143.73, sram_power = 19.60;          // at mu = 20
  double hbm3_phy_area = 29.60, hbm3_phy_power = 31.80;   // per PHY (1 TB/s)
  double hbm2_phy_area = 14.90;                           // per PHY (<= 512 GB/s)
  double hbm2_phy_power = 14.90 / 29.60 * 31.80;
  // modmul unit areas (for reference only; Table 4 anchors)
  double modmul_area_255 = 0.133, modmul_area_381 = 0.314;

  // reference knobs the anchors were measured at
  std::uint32_t ref_msm_pes = 16, ref_msm_window = 9, ref_msm_ppe = 2048;
  std::uint32_t ref_sumcheck_pes = 2, ref_update_pes = 11, ref_update_muls = 4;
  std::uint32_t ref_fracmle_pes = 1, ref_mu = 20;

  // latency-model parameters
  std::uint32_t padd_pipeline_depth = 32;  // stages of the pipelined PADD
  std::uint32_t modmul_latency = 12;       // pipelined 255b multiplier
  std::uint32_t beea_latency = 509;        // 2W-1 at W = 255
  std::uint32_t scalar_bits = 255;
  std::uint32_t scalar_bytes = 32;
  std::uint32_t point_bytes = 96;          // (X, Y) streamed, Z = 1 implied
  std::uint32_t agg_group_size = 16;
  std::uint32_t interp_tail_zerocheck = 23;  // fixed per-round modmuls
  std::uint32_t interp_tail_permcheck = 46;
  std::uint32_t batch_eval_units = 6;
  double hbm_efficiency = 0.75;  // delivered fraction of rated bandwidth
  std::uint32_t combine_modmuls = 72;
  std::uint32_t tree_outputs_per_cycle = 8;  // tree unit parallelism p
};

inline double effective_bandwidth(const DesignPoint& d, const CostTables& cost) {
  return (double)d.bandwidth_gbps * cost.hbm_efficiency;
}

// ---------------------------------------------------------------------------
// Aggregation latency model (per window, per PE): naive running sum is one
// serial dependency chain; grouped interleaves its group chains through the
// pipeline and pays one combine chain.
// ---------------------------------------------------------------------------

struct AggLatency {
  double cycles = 0;
  double ops = 0;
};

inline AggLatency aggregation_latency(std::uint32_t window, std::size_t group_size,
                                      const CostTables& cost, bool grouped) {
  const double D = cost.padd_pipeline_depth;
  const double m = (double)((std::size_t{1} << window) - 1);
  AggLatency out;
  if (!grouped) {
    out.ops = 2 * m;
    out.cycles = 2 * m * D;  // fully serial chain, no pipelining
    return out;
  }
  const double g = (double)group_size;
  const double kg = std::ceil(m / g);
  double lg = std::floor(std::log2(g));
  double combine_chain = (kg > 1) ? 2 * (kg - 1) + lg + 1 : 0;
  double combine_extra = (kg > 1) ? (kg - 1) : 0;  // parallel T-sum chain ops
  out.ops = 2 * m + combine_chain + combine_extra;
  // group chains interleave: issue-bound when enough groups cover the
  // pipeline depth, chain-bound otherwise
  double groups_phase = std::max(2 * m + D, 2 * g * D);
  out.cycles = groups_phase + combine_chain * D;
  return out;
}

// ---------------------------------------------------------------------------
// MSM cycle model.  Event-level: bucket issue, per-window aggregation,
// cross-PE merge, window combine, sparse ones-tree.  Aggregation chains of
// one window overlap the next window's bucket issue when grouped.
// ---------------------------------------------------------------------------

struct MsmBreakdown {
  double bucket = 0;
  double aggregation = 0;
  double tree = 0;
  double combine = 0;
  double total = 0;
  double bytes = 0;
  bool aggregation_dominates = false;
};

inline MsmBreakdown msm_cycle_model(std::size_t n, double frac_zero,
                                    double frac_one, double frac_dense,
                                    const DesignPoint& d, const CostTables& cost,
                                    bool grouped_aggregation = true) {
  (void)frac_zero;  // zero scalars are skipped outright
  MsmBreakdown out;
  const double D = cost.padd_pipeline_depth;
  const std::uint32_t W = d.msm_window;
  const std::uint32_t k = (cost.scalar_bits + W - 1) / W;
  const double m = (double)((std::size_t{1} << W) - 1);
  const double g = cost.agg_group_size;
  const double n_ones = (double)n * frac_one;
  const double n_dense = (double)n * frac_dense;

  // small MSMs stay on fewer PEs (at least 128 points per active PE)
  double pe = std::max(1.0, std::min((double)d.msm_pes,
                                     std::floor(n_dense / 128.0)));

  if (n_ones >= 1) {
    out.tree = (n_ones - 1) / (double)d.msm_pes +
               std::ceil(std::log2(std::max(2.0, n_ones))) * D;
  }

  if (n_dense >= 1) {
    double occ_digit = 1.0 - std::pow(2.0, -(double)W);
    double inserts = std::ceil(n_dense / pe) * occ_digit;  // per PE per window
    out.bucket = (double)k * inserts;

    // occupied buckets and groups per PE (expected)
    double occ = m * (1.0 - std::exp(inserts * std::log1p(-1.0 / m)));
    double kg = std::ceil(m / g);
    double kg_occ =
        kg <= 1 ? kg : kg * (1.0 - std::exp(occ * std::log1p(-1.0 / kg)));
    double lg = std::floor(std::log2(g));
    if (grouped_aggregation) {
      // occupancy-aware issue per window, chains drain once at the end
      double issue = 2 * occ + (kg_occ > 1 ? 3 * (kg_occ - 1) + lg + 1 : 0);
      double local_chain = 2 * std::min(g, std::ceil(occ * g / m) + 1);
      double combine_chain = kg_occ > 1 ? 2 * (kg_occ - 1) + lg + 1 : 0;
      out.aggregation = (double)k * issue + (local_chain + combine_chain) * D;
    } else {
      // fixed serial walk over the full bucket range, every window
      out.aggregation = (double)k * 2 * m * D;
    }
    // cross-PE merge plus the running window-combine chain
    double merge = (pe > 1) ? (double)k * (pe - 1) + std::log2(pe) * D : 0;
    out.combine = merge + (double)(k - 1) * (W + 1) + (W + 1) * D;
  }

  out.total = out.bucket + out.aggregation + out.tree + out.combine;
  out.aggregation_dominates = out.aggregation > 0.8 * out.total;

  // bytes: scalars and points stream once (all windows' buckets are updated
  // as each point passes through), so MSMs stay compute-bound across the
  // whole bandwidth range
  out.bytes = (double)n * cost.scalar_bytes +
              (n_ones + n_dense) * cost.point_bytes;
  double bw_cycles = out.bytes / effective_bandwidth(d, cost);
  if (bw_cycles > out.total) out.total = bw_cycles;
  return out;
}

// Desk-scale variant driven by a recorded functional op log.
inline MsmBreakdown msm_cycle_sim(const msm::OpLog& log, const DesignPoint& d,
                                  const CostTables& cost) {
  MsmBreakdown out;
  const double D = cost.padd_pipeline_depth;
  std::size_t bucket_ops = 0, tree_ops = 0, combine_ops = 0;
  // per (window, chain) aggregation chain lengths
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> group_chains,
      combine_chains;
  std::size_t agg_ops = 0;
  for (const auto& r : log.records) {
    switch (r.phase) {
      case msm::Phase::bucket: ++bucket_ops; break;
      case msm::Phase::sparse_tree: ++tree_ops; break;
      case msm::Phase::window_combine: ++combine_ops; break;
      case msm::Phase::aggregate_group:
        ++agg_ops;
        ++group_chains[{r.window, r.chain}];
        break;
      case msm::Phase::aggregate_combine:
        ++agg_ops;
        ++combine_chains[{r.window, r.chain}];
        break;
    }
  }
  std::size_t max_group = 0, max_combine = 0;
  for (auto& [key, len] : group_chains) max_group = std::max(max_group, len);
  for (auto& [key, len] : combine_chains) max_combine = std::max(max_combine, len);

  out.bucket = std::ceil((double)bucket_ops / d.msm_pes);
  out.tree = tree_ops > 0 ? (double)tree_ops / d.msm_pes +
                                std::ceil(std::log2((double)tree_ops + 2)) * D
                          : 0;
  out.aggregation =
      (double)agg_ops + (double)(max_group + max_combine) * D;
  out.combine = (double)combine_ops + D;
  out.total = out.bucket + out.aggregation + out.tree + out.combine;
  out.aggregation_dominates = out.aggregation > 0.8 * out.total;
  return out;
}

// ---------------------------------------------------------------------------
// SumCheck latency model: per round, compute is instance-parallel across PEs
// with a fixed interpolation tail; operand streams bound the round from
// below through the bandwidth.  MLE updates overlap with their own PEs.
// ---------------------------------------------------------------------------

struct SumCheckLatency {
  double cycles = 0;
  double bytes = 0;
};

inline std::uint32_t composition_operands(sumcheck::CompositionKind kind) {
  switch (kind) {
    case sumcheck::CompositionKind::zero_check: return 9;
    case sumcheck::CompositionKind::perm_check: return 11;
    default: return 12;
  }
}

inline SumCheckLatency sumcheck_latency(std::uint32_t mu,
                                        sumcheck::CompositionKind kind,
                                        const DesignPoint& d,
                                        const CostTables& cost) {
  SumCheckLatency out;
  const std::uint32_t ops = composition_operands(kind);
  double tail = kind == sumcheck::CompositionKind::zero_check
                    ? cost.interp_tail_zerocheck
                    : kind == sumcheck::CompositionKind::perm_check
                          ? cost.interp_tail_permcheck
                          : 0;
  for (std::uint32_t j = 1; j <= mu; ++j) {
    double inst = (double)(std::uint64_t{1} << (mu - j));
    double compute = inst / d.sumcheck_pes + tail;
    double update = inst * ops /
                    ((double)d.mle_update_pes * d.modmuls_per_update_pe);
    // per instance per operand: the round unit reads the pair, the update
    // unit re-reads it and writes the halved table back
    double bytes = inst * ops * (2.0 + 2.0 + 1.0) * cost.scalar_bytes;
    double bw = bytes / effective_bandwidth(d, cost);
    out.cycles += std::max({compute, update, bw});
    out.bytes += bytes;
  }
  return out;
}

// ---------------------------------------------------------------------------
// FracMLE batch-size optimizer: minimize the imbalance between the parallel
// partial-product latency and the tree+inversion latency; report the unit
// count that masks one inversion per n inputs (architectural cap 256 units).
// ---------------------------------------------------------------------------

struct BatchOptimizerResult {
  std::size_t best_n = 0;
  double best_imbalance = 0;
  std::vector<std::size_t> batch_sizes;
  std::vector<double> imbalance;
  std::vector<std::size_t> units;
};

inline BatchOptimizerResult fracmle_batch_optimizer(const CostTables& cost) {
  BatchOptimizerResult out;
  const double t = cost.modmul_latency;
  const double inv = cost.beea_latency;
  double best = 0;
  for (std::size_t n = 2; n <= 1024; n *= 2) {
    double partial = t * (double)(n - 1);
    double tree_inv = t * std::log2((double)n) + inv;
    double imb = std::abs(partial - tree_inv);
    double mask = std::max(partial, tree_inv);
    std::size_t units = (std::size_t)std::min(
        256.0, std::ceil(mask / (double)n));
    out.batch_sizes.push_back(n);
    out.imbalance.push_back(imb);
    out.units.push_back(units);
    if (out.best_n == 0 || imb < best) {
      best = imb;
      out.best_n = n;
      out.best_imbalance = imb;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Area/power roll-up, exact at the reference design.
// ---------------------------------------------------------------------------

struct AreaPower {
  double msm, sumcheck, nd, fracmle, combine, update, tree, other;
  double compute;
  double sram, phy;
  double memory;
  double total;
};

struct RollupResult {
  AreaPower area;
  AreaPower power;
};

inline RollupResult area_power_rollup(const DesignPoint& d, std::uint32_t mu,
                                      const CostTables& cost,
                                      bool enforce_domains = true) {
  if (enforce_domains) {
    KnobDomains domains;
    if (!domains.contains(d)) throw PerfError("design knob outside Table 2");
  }

  auto scale_msm_pe = [&](double anchor) {
    // datapath half, bucket registers quarter, point SRAM quarter
    double per_pe = anchor / cost.ref_msm_pes;
    double shape = 0.5 +
                   0.25 * std::pow(2.0, (double)d.msm_window -
                                            (double)cost.ref_msm_window) +
                   0.25 * ((double)d.msm_points_per_pe / cost.ref_msm_ppe);
    return per_pe * shape * d.msm_pes;
  };

  RollupResult r;
  r.area.msm = scale_msm_pe(cost.msm_area);
  r.power.msm = scale_msm_pe(cost.msm_power);
  r.area.sumcheck = cost.sumcheck_area / cost.ref_sumcheck_pes * d.sumcheck_pes;
  r.power.sumcheck = cost.sumcheck_power / cost.ref_sumcheck_pes * d.sumcheck_pes;
  r.area.nd = cost.nd_area;
  r.power.nd = cost.nd_power;
  r.area.fracmle = cost.fracmle_area / cost.ref_fracmle_pes * d.fracmle_pes;
  r.power.fracmle = cost.fracmle_power / cost.ref_fracmle_pes * d.fracmle_pes;
  r.area.combine = cost.combine_area;
  r.power.combine = cost.combine_power;
  double update_units = (double)d.mle_update_pes * d.modmuls_per_update_pe;
  double ref_update_units = (double)cost.ref_update_pes * cost.ref_update_muls;
  r.area.update = cost.update_area / ref_update_units * update_units;
  r.power.update = cost.update_power / ref_update_units * update_units;
  r.area.tree = cost.tree_area;
  r.power.tree = cost.tree_power;
  r.area.other = cost.other_area;
  r.power.other = cost.other_power;

  r.area.compute = r.area.msm + r.area.sumcheck + r.area.nd + r.area.fracmle +
                   r.area.combine + r.area.update + r.area.tree + r.area.other;
  r.power.compute = r.power.msm + r.power.sumcheck + r.power.nd +
                    r.power.fracmle + r.power.combine + r.power.update +
                    r.power.tree + r.power.other;

  // SRAM: global MLE storage (compressed) scales with 2^mu; MSM and FracMLE
  // local SRAM scale with their knobs
  double sram_scale =
      0.7 * std::pow(2.0, (double)mu - cost.ref_mu) +
      0.2 * ((double)d.msm_pes * d.msm_points_per_pe) /
          ((double)cost.ref_msm_pes * cost.ref_msm_ppe) +
      0.1;
  r.area.sram = cost.sram_area * sram_scale;
  r.power.sram = cost.sram_power * sram_scale;

  double phy_area = 0, phy_power = 0;
  if (d.bandwidth_gbps >= 1024) {
    double count = std::ceil((double)d.bandwidth_gbps / 1024.0);
    phy_area = count * cost.hbm3_phy_area;
    phy_power = count * cost.hbm3_phy_power;
  } else {
    phy_area = cost.hbm2_phy_area;
    phy_power = cost.hbm2_phy_power;
  }
  r.area.phy = phy_area;
  r.power.phy = phy_power;
  r.area.memory = r.area.sram + r.area.phy;
  r.power.memory = r.power.sram + r.power.phy;
  r.area.total = r.area.compute + r.area.memory;
  r.power.total = r.power.compute + r.power.memory;
  return r;
}

// ---------------------------------------------------------------------------
// Full-protocol runtime composition (the five-step structure with the final
// two steps in parallel).
// ---------------------------------------------------------------------------

struct StepLatency {
  double witness_commit = 0;
  double zero_check = 0;
  double wire_identity = 0;
  double perm_check = 0;
  double batch_eval = 0;
  double poly_open = 0;
  double total = 0;
  double bytes = 0;
};

inline StepLatency protocol_latency(std::uint32_t mu, double frac_zero,
                                    double frac_one, double frac_dense,
                                    const DesignPoint& d, const CostTables& cost) {
  StepLatency s;
  const double n = (double)(std::uint64_t{1} << mu);
  const double sb = cost.scalar_bytes;
  const double bw = effective_bandwidth(d, cost);

  // initial prefetch of the input MLEs into the global SRAM (sigma tables at
  // full width, control/witness tables compressed)
  double prefetch = (3.0 + 0.5) * n * sb;
  s.witness_commit += prefetch / bw;
  s.bytes += prefetch;

  // (1) three sparse witness MSMs
  for (int i = 0; i < 3; ++i) {
    auto m = msm_cycle_model((std::size_t)n, frac_zero, frac_one, frac_dense, d,
                             cost);
    s.witness_commit += std::max(m.total, m.bytes / bw);
    s.bytes += m.bytes;
  }

  // (2) ZeroCheck: eq table built on the tree unit and spilled off-chip,
  // then the rounds with their updates
  auto zc = sumcheck_latency(mu, sumcheck::CompositionKind::zero_check, d, cost);
  double eq_build = n / cost.tree_outputs_per_cycle;
  s.zero_check = std::max(eq_build, n * sb / bw) + zc.cycles;
  s.bytes += zc.bytes + n * sb;

  // (3) wire identity: N&D -> FracMLE -> ProdMLE stream into the two dense
  // commitments; stages rate-match, the slowest one governs.  The six
  // intermediate MLEs spill off-chip for the PermutationCheck, phi and pi
  // spill for the later steps, and the MSM points stream in.
  double nd_stage = n;  // six intermediate MLEs in parallel, one elt/cycle
  double frac_stage = n / d.fracmle_pes;
  double prod_stage = n;
  auto phi_msm = msm_cycle_model((std::size_t)n, 0, 0, 1.0, d, cost);
  auto pi_msm = msm_cycle_model((std::size_t)n, 0, 0, 1.0, d, cost);
  double wire_bytes = phi_msm.bytes + pi_msm.bytes + n * sb * (6 + 2);
  s.wire_identity = std::max({nd_stage, frac_stage, prod_stage,
                              phi_msm.total + pi_msm.total, wire_bytes / bw});
  s.bytes += wire_bytes;

  auto pc = sumcheck_latency(mu, sumcheck::CompositionKind::perm_check, d, cost);
  s.perm_check = std::max(n / cost.tree_outputs_per_cycle, n * sb / bw) +
                 pc.cycles;
  s.bytes += pc.bytes + n * sb;

  // (4A) batch evaluations on the tree units; each phi/pi query re-streams
  // its full off-chip table (four phi points, five pi points)
  double batch_bytes = 9.0 * n * sb;
  s.batch_eval = std::max(22.0 * n / (cost.batch_eval_units *
                                      cost.tree_outputs_per_cycle),
                          batch_bytes / bw);
  s.bytes += batch_bytes;

  // (4B) polynomial opening: combine (reads phi/pi, writes the six y tables,
  // re-read for g'), the six eq-table builds spilled off-chip, OpenCheck,
  // then the halving MSM ladder driven by the OpenCheck challenges
  // (independent MSMs, issue-bound back to back)
  double combine_bytes = (2.0 + 6.0 + 6.0 + 1.0 + 6.0) * n * sb;
  double combine = std::max(18.0 * n / cost.combine_modmuls, combine_bytes / bw);
  auto oc = sumcheck_latency(mu, sumcheck::CompositionKind::open_check, d, cost);
  double ladder = 0, ladder_bytes = 0, ladder_tail = 0;
  for (std::uint32_t sbits = mu; sbits-- > 0;) {
    auto m = msm_cycle_model(std::size_t{1} << sbits, 0, 0, 1.0, d, cost);
    ladder += m.bucket + m.aggregation - (m.aggregation > 0 ? 0 : 0);
    ladder_tail = std::max(ladder_tail, m.combine);
    // the halving writes g'' and the MSM reads it back alongside the points
    ladder_bytes += m.bytes + 2.0 * (double)(std::uint64_t{1} << sbits) * sb;
  }
  ladder += ladder_tail;
  ladder = std::max(ladder, ladder_bytes / bw);
  s.poly_open = combine + oc.cycles + ladder;
  s.bytes += oc.bytes + ladder_bytes + combine_bytes;

  s.total = s.witness_commit + s.zero_check + s.wire_identity + s.perm_check +
            std::max(s.batch_eval, s.poly_open);
  return s;
}

// ---------------------------------------------------------------------------
// Design-space exploration with Pareto extraction.
// ---------------------------------------------------------------------------

struct DseRow {
  DesignPoint design;
  double runtime_ms = 0;
  double area_mm2 = 0;
  double power_w = 0;
  bool pareto_local = false;   // within its bandwidth tier
  bool pareto_global = false;
  StepLatency steps;
};

inline std::vector<DseRow> enumerate_designs(std::uint32_t mu,
                                             const KnobDomains& domains,
                                             const CostTables& cost,
                                             double frac_zero = 0.45,
                                             double frac_one = 0.45,
                                             double frac_dense = 0.10,
                                             unsigned threads = 0);

inline void mark_pareto(std::vector<DseRow>& rows) {
  // local frontiers per bandwidth, then the global frontier
  auto sweep = [](std::vector<DseRow*>& v, bool DseRow::*flag) {
    std::sort(v.begin(), v.end(), [](const DseRow* a, const DseRow* b) {
      if (a->area_mm2 != b->area_mm2) return a->area_mm2 < b->area_mm2;
      if (a->runtime_ms != b->runtime_ms) return a->runtime_ms < b->runtime_ms;
      return a->design.bandwidth_gbps < b->design.bandwidth_gbps;
    });
    double best_runtime = std::numeric_limits<double>::infinity();
    for (auto* r : v) {
      if (r->runtime_ms < best_runtime) {
        r->*flag = true;
        best_runtime = r->runtime_ms;
      }
    }
  };
  std::map<std::uint32_t, std::vector<DseRow*>> by_bw;
  std::vector<DseRow*> all;
  for (auto& r : rows) {
    by_bw[r.design.bandwidth_gbps].push_back(&r);
    all.push_back(&r);
  }
  for (auto& [bw, v] : by_bw) sweep(v, &DseRow::pareto_local);
  sweep(all, &DseRow::pareto_global);
}

inline std::vector<DseRow> enumerate_designs(std::uint32_t mu,
                                             const KnobDomains& domains,
                                             const CostTables& cost,
                                             double frac_zero, double frac_one,
                                             double frac_dense,
                                             unsigned threads) {
  std::vector<DesignPoint> points;
  points.reserve(domains.cross_product_size());
  for (auto a : domains.msm_pes)
    for (auto b : domains.msm_window)
      for (auto c : domains.msm_points_per_pe)
        for (auto e : domains.fracmle_pes)
          for (auto f : domains.sumcheck_pes)
            for (auto g : domains.mle_update_pes)
              for (auto h : domains.modmuls_per_update_pe)
                for (auto i : domains.bandwidth_gbps)
                  points.push_back({a, b, c, e, f, g, h, i});

  std::vector<DseRow> rows(points.size());
  unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
  if (nthreads == 0) nthreads = 1;
  auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      DseRow row;
      row.design = points[i];
      row.steps = protocol_latency(mu, frac_zero, frac_one, frac_dense,
                                   points[i], cost);
      row.runtime_ms = row.steps.total / 1e6;  // cycles at 1 GHz -> ms
      auto rp = area_power_rollup(points[i], mu, cost);
      row.area_mm2 = rp.area.total;
      row.power_w = rp.power.total;
      rows[i] = row;
    }
  };
  std::vector<std::thread> pool;
  std::size_t chunk = (points.size() + nthreads - 1) / nthreads;
  for (unsigned t = 0; t < nthreads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(points.size(), lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(worker, lo, hi);
  }
  for (auto& th : pool) th.join();
  mark_pareto(rows);
  return rows;
}

}  // namespace zkspeed::perf
