#pragma once

// Multi-scalar multiplication: Pippenger windowed bucketing with grouped
// bucket aggregation, the sparse 1-scalar tree + dense Pippenger split, and
// the naive double-and-add oracle.
//
// Every point operation can be recorded into an OpLog.  Records within one
// (phase, window, chain) triple are sequentially dependent; aggregate_combine
// chains depend on all aggregate_group chains of their window; window_combine
// depends on everything earlier in its window.  The cycle model consumes
// these summaries.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zkspeed/ec.hpp"

namespace zkspeed::msm {

using ec::CurveConfig;
using ec::CurvePoint;
using fp::FieldElement;

struct MsmError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Phase : std::uint8_t {
  bucket,
  aggregate_group,
  aggregate_combine,
  window_combine,
  sparse_tree,
};

enum class OpType : std::uint8_t { padd, pdbl };

struct OpRecord {
  Phase phase;
  std::uint32_t window;
  std::uint32_t chain;
  OpType type;
};

struct OpLog {
  std::vector<OpRecord> records;

  void add(Phase p, std::uint32_t window, std::uint32_t chain, OpType t) {
    records.push_back({p, window, chain, t});
  }
  std::size_t count(Phase p) const {
    std::size_t n = 0;
    for (auto& r : records) n += (r.phase == p);
    return n;
  }
};

struct MsmInstance {
  std::vector<FieldElement> scalars;
  std::vector<CurvePoint> points;  // affine inputs: Z = 1 (or identity)
  std::uint32_t window_size = 10;

  void validate() const {
    if (scalars.size() != points.size())
      throw MsmError("scalar/point length mismatch");
    if (scalars.empty()) return;
    const auto& sf = scalars[0].config();
    if (window_size < 1 || window_size > sf.bit_width)
      throw MsmError("window size out of range");
    for (const auto& p : points) {
      if (!p.is_identity() &&
          p.Z != FieldElement::one(p.curve->base_field))
        throw MsmError("input points must have Z = 1");
    }
  }
};

struct SparsityTally {
  std::size_t zeros = 0;
  std::size_t ones = 0;
  std::size_t dense = 0;

  std::size_t total() const { return zeros + ones + dense; }
};

inline SparsityTally tally_scalars(const std::vector<FieldElement>& scalars) {
  SparsityTally t;
  for (const auto& s : scalars) {
    if (s.is_zero()) ++t.zeros;
    else if (s == FieldElement::one(s.config())) ++t.ones;
    else ++t.dense;
  }
  return t;
}

// ---------------------------------------------------------------------------
// msm_naive: the oracle, sum of scalar_mul in index order.
// ---------------------------------------------------------------------------

inline CurvePoint msm_naive(const MsmInstance& inst, const CurveConfig& curve) {
  inst.validate();
  auto acc = ec::identity_point(curve);
  for (std::size_t i = 0; i < inst.scalars.size(); ++i)
    acc = ec::padd(acc, ec::scalar_mul(inst.scalars[i], inst.points[i]));
  return acc;
}

// ---------------------------------------------------------------------------
// Grouped bucket aggregation: sum of i * B_i for i = 1 .. m.
// Groups of size g compute local (weighted, plain) running sums in parallel
// chains; group results combine as sum_j T_j + g * sum_j j*S_j.
// g == m reproduces the naive single-chain schedule exactly.
// ---------------------------------------------------------------------------

struct AggSchedule {
  std::size_t ops = 0;            // PADD/PDBL invocations
  std::size_t critical_path = 0;  // longest dependent chain
};

inline CurvePoint aggregate_buckets(const std::vector<CurvePoint>& buckets,
                                    std::size_t group_size,
                                    const CurveConfig& curve,
                                    OpLog* log = nullptr,
                                    std::uint32_t window = 0,
                                    AggSchedule* sched = nullptr) {
  if (group_size < 1) throw MsmError("group size must be >= 1");
  const std::size_t m = buckets.size();
  auto id = ec::identity_point(curve);
  if (m == 0) return id;

  const std::size_t g = group_size;
  const std::size_t k = (m + g - 1) / g;

  std::vector<CurvePoint> T(k, id), S(k, id);
  std::size_t max_group_chain = 0;
  std::size_t ops = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t lo = j * g;                  // bucket index offset (0-based)
    std::size_t hi = std::min(lo + g, m);    // exclusive
    auto acc = id;
    auto sum = id;
    std::size_t chain_len = 0;
    for (std::size_t t = hi; t-- > lo;) {
      acc = ec::padd(acc, buckets[t]);
      sum = ec::padd(sum, acc);
      if (log) {
        log->add(Phase::aggregate_group, window, (std::uint32_t)j, OpType::padd);
        log->add(Phase::aggregate_group, window, (std::uint32_t)j, OpType::padd);
      }
      chain_len += 2;
      ops += 2;
    }
    T[j] = sum;
    S[j] = acc;
    max_group_chain = std::max(max_group_chain, chain_len);
  }

  if (k == 1) {
    if (sched) {
      sched->ops = ops;
      sched->critical_path = max_group_chain;
    }
    return T[0];
  }

  // chain A: plain sum of the T_j
  const std::uint32_t chainA = (std::uint32_t)k;
  auto tsum = T[0];
  std::size_t lenA = 0;
  for (std::size_t j = 1; j < k; ++j) {
    tsum = ec::padd(tsum, T[j]);
    if (log) log->add(Phase::aggregate_combine, window, chainA, OpType::padd);
    ++lenA;
    ++ops;
  }

  // chain B: running suffix over the S_j gives sum_j j*S_j, then * g, then
  // the final fold with chain A's output.
  const std::uint32_t chainB = chainA + 1;
  auto acc = id;
  auto weighted = id;
  std::size_t lenB = 0;
  for (std::size_t j = k; j-- > 1;) {
    acc = ec::padd(acc, S[j]);
    weighted = ec::padd(weighted, acc);
    if (log) {
      log->add(Phase::aggregate_combine, window, chainB, OpType::padd);
      log->add(Phase::aggregate_combine, window, chainB, OpType::padd);
    }
    lenB += 2;
    ops += 2;
  }
  // weighted *= g by double-and-add (MSB of g handled by the initial copy)
  CurvePoint scaled = weighted;
  {
    std::uint64_t bits = 64 - (std::uint64_t)__builtin_clzll(g);
    for (std::uint64_t b = bits - 1; b-- > 0;) {
      scaled = ec::padd(scaled, scaled);
      if (log) log->add(Phase::aggregate_combine, window, chainB, OpType::pdbl);
      ++lenB;
      ++ops;
      if ((g >> b) & 1) {
        scaled = ec::padd(scaled, weighted);
        if (log) log->add(Phase::aggregate_combine, window, chainB, OpType::padd);
        ++lenB;
        ++ops;
      }
    }
  }
  auto total = ec::padd(tsum, scaled);
  if (log) log->add(Phase::aggregate_combine, window, chainB, OpType::padd);
  ++lenB;
  ++ops;

  if (sched) {
    sched->ops = ops;
    sched->critical_path = max_group_chain + std::max(lenA, lenB);
  }
  return total;
}

// ---------------------------------------------------------------------------
// pippenger: unsigned W-bit windows, bucket 0 skipped, empty buckets are the
// identity (padd absorbs them).  Windows processed most-significant first.
// ---------------------------------------------------------------------------

struct PippengerCounts {
  std::size_t bucket_adds = 0;
  std::size_t aggregation_ops = 0;
  std::size_t combine_doublings = 0;
  std::size_t combine_adds = 0;

  std::size_t total() const {
    return bucket_adds + aggregation_ops + combine_doublings + combine_adds;
  }
};

inline CurvePoint pippenger(const MsmInstance& inst, const CurveConfig& curve,
                            OpLog* log = nullptr, std::size_t group_size = 16,
                            PippengerCounts* counts = nullptr) {
  inst.validate();
  auto id = ec::identity_point(curve);
  if (inst.scalars.empty()) return id;

  const auto& sf = inst.scalars[0].config();
  const std::uint32_t W = inst.window_size;
  const std::uint32_t nbits = sf.bit_width;
  const std::uint32_t nwin = (nbits + W - 1) / W;
  const std::size_t m = (std::size_t{1} << W) - 1;

  std::vector<fp::Limbs> canon(inst.scalars.size());
  for (std::size_t i = 0; i < inst.scalars.size(); ++i)
    canon[i] = inst.scalars[i].canonical();

  auto digit_of = [&](std::size_t i, std::uint32_t w) -> std::uint64_t {
    std::uint64_t out = 0;
    for (std::uint32_t b = 0; b < W; ++b) {
      std::uint32_t bit = w * W + b;
      if (bit >= nbits) break;
      out |= ((canon[i][bit / 64] >> (bit % 64)) & 1) << b;
    }
    return out;
  };

  auto result = id;
  for (std::uint32_t w = nwin; w-- > 0;) {
    if (w + 1 != nwin) {
      for (std::uint32_t d = 0; d < W; ++d) {
        result = ec::padd(result, result);
        if (log) log->add(Phase::window_combine, w, 0, OpType::pdbl);
        if (counts) ++counts->combine_doublings;
      }
    }
    std::vector<CurvePoint> buckets(m, id);
    for (std::size_t i = 0; i < inst.scalars.size(); ++i) {
      std::uint64_t d = digit_of(i, w);
      if (d == 0) continue;
      buckets[d - 1] = ec::padd(buckets[d - 1], inst.points[i]);
      if (log) log->add(Phase::bucket, w, (std::uint32_t)(d - 1), OpType::padd);
      if (counts) ++counts->bucket_adds;
    }
    AggSchedule sched;
    auto wsum = aggregate_buckets(buckets, group_size, curve, log, w, &sched);
    if (counts) counts->aggregation_ops += sched.ops;
    result = ec::padd(result, wsum);
    if (log) log->add(Phase::window_combine, w, 0, OpType::padd);
    if (counts) ++counts->combine_adds;
  }
  return result;
}

// Closed-form expected PADD/PDBL census for an instance, from its actual
// digit decomposition.  Must equal the op-log tally.
inline PippengerCounts pippenger_expected_counts(const MsmInstance& inst,
                                                 std::size_t group_size = 16) {
  PippengerCounts c;
  if (inst.scalars.empty()) return c;
  const auto& sf = inst.scalars[0].config();
  const std::uint32_t W = inst.window_size;
  const std::uint32_t nwin = (sf.bit_width + W - 1) / W;
  const std::size_t m = (std::size_t{1} << W) - 1;
  const std::size_t g = group_size;
  const std::size_t k = (m + g - 1) / g;

  std::vector<fp::Limbs> canon(inst.scalars.size());
  for (std::size_t i = 0; i < inst.scalars.size(); ++i)
    canon[i] = inst.scalars[i].canonical();
  for (std::uint32_t w = 0; w < nwin; ++w) {
    for (std::size_t i = 0; i < inst.scalars.size(); ++i) {
      std::uint64_t d = 0;
      for (std::uint32_t b = 0; b < W && w * W + b < sf.bit_width; ++b)
        d |= ((canon[i][(w * W + b) / 64] >> ((w * W + b) % 64)) & 1) << b;
      c.bucket_adds += (d != 0);
    }
  }
  std::size_t agg = 2 * m;  // group running sums over all buckets
  if (k > 1) {
    agg += (k - 1) + 2 * (k - 1);
    std::uint64_t bits = 64 - (std::uint64_t)__builtin_clzll(g);
    agg += bits - 1;  // doublings
    agg += (std::size_t)__builtin_popcountll(g) - 1;
    agg += 1;  // final fold
  }
  c.aggregation_ops = agg * nwin;
  c.combine_doublings = (std::size_t)(nwin - 1) * W;
  c.combine_adds = nwin;
  return c;
}

// ---------------------------------------------------------------------------
// msm_sparse: zeros skipped, 1-valued scalars reduced by a pairwise PADD
// tree, the dense remainder through pippenger.
// ---------------------------------------------------------------------------

inline CurvePoint msm_sparse(const MsmInstance& inst, const SparsityTally& tally,
                             const CurveConfig& curve, OpLog* log = nullptr,
                             std::size_t group_size = 16) {
  inst.validate();
  auto actual = tally_scalars(inst.scalars);
  if (actual.zeros != tally.zeros || actual.ones != tally.ones ||
      actual.dense != tally.dense)
    throw MsmError("sparsity tally inconsistent with scalars");

  auto id = ec::identity_point(curve);
  std::vector<CurvePoint> level;
  MsmInstance dense;
  dense.window_size = inst.window_size;
  for (std::size_t i = 0; i < inst.scalars.size(); ++i) {
    const auto& s = inst.scalars[i];
    if (s.is_zero()) continue;
    if (s == FieldElement::one(s.config())) {
      level.push_back(inst.points[i]);
    } else {
      dense.scalars.push_back(s);
      dense.points.push_back(inst.points[i]);
    }
  }

  auto ones_sum = id;
  if (!level.empty()) {
    std::uint32_t depth = 0;
    while (level.size() > 1) {
      std::vector<CurvePoint> next;
      next.reserve((level.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
        next.push_back(ec::padd(level[i], level[i + 1]));
        if (log) log->add(Phase::sparse_tree, 0, depth, OpType::padd);
      }
      if (level.size() & 1) next.push_back(level.back());
      level = std::move(next);
      ++depth;
    }
    ones_sum = level[0];
  }

  auto dense_sum =
      dense.scalars.empty() ? id : pippenger(dense, curve, log, group_size);
  if (level.empty()) return dense_sum;
  if (dense.scalars.empty()) return ones_sum;
  auto total = ec::padd(ones_sum, dense_sum);
  if (log) log->add(Phase::window_combine, 0, 1, OpType::padd);
  return total;
}

}  // namespace zkspeed::msm
