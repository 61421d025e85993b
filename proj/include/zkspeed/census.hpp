#pragma once

// Per-kernel modular-multiplication census.  The analytical mode evaluates
// closed forms for the reference-convention kernels at any size; the
// functional mode runs the same kernels instrumented through the fp modmul
// counter (tractable up to mu = 16) and must agree within 1%.
//
// Reference conventions (matching the profiled CPU implementation): dense
// random scalars, per-step Pippenger windows (witness 10, wiring 6, opening
// 4), complete-formula PADD at 17 modmuls, naive-walk bucket aggregation,
// shared operand evaluations inside SumCheck rounds with one modmul per
// extension node, per-term products at natural degree.  The wiring-identity
// commitments follow the reference code's sizes: 2^mu (fraction) plus
// 2^(mu+1) (product structure).

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "zkspeed/msm.hpp"
#include "zkspeed/perf.hpp"
#include "zkspeed/permwire.hpp"
#include "zkspeed/sumcheck.hpp"

namespace zkspeed::census {

using fp::FieldConfig;
using fp::FieldElement;
using mle::MleTable;

inline constexpr std::uint32_t kWitnessWindow = 10;
inline constexpr std::uint32_t kWireWindow = 6;
inline constexpr std::uint32_t kOpenWindow = 4;
inline constexpr double kPaddModmuls = 17.0;  // complete projective formula
inline constexpr std::size_t kFracBatch = 64;
inline constexpr std::size_t kAggGroupSize = 16;

struct KernelCensus {
  std::string kernel;
  double modmuls = 0;
  double input_bytes = 0;
  double output_bytes = 0;
};

using CensusReport = std::vector<KernelCensus>;

inline double find_kernel(const CensusReport& r, const std::string& name) {
  for (const auto& k : r)
    if (k.kernel == name) return k.modmuls;
  throw perf::PerfError("unknown census kernel: " + name);
}

// ---------------------------------------------------------------------------
// Analytical closed forms
// ---------------------------------------------------------------------------

namespace detail {

inline double field_as_double(const FieldConfig& cfg) {
  double v = 0;
  for (std::size_t i = cfg.nlimbs; i-- > 0;)
    v = v * 18446744073709551616.0 + (double)cfg.modulus[i];
  return v;
}

// expected nonzero digits per scalar for W-bit windows over this field
inline double expected_nonzero_digits(const FieldConfig& cfg, std::uint32_t w) {
  const std::uint32_t bits = cfg.bit_width;
  const std::uint32_t k = (bits + w - 1) / w;
  double total = 0;
  double q = field_as_double(cfg);
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint32_t lo = i * w;
    if (i + 1 < k) {
      total += 1.0 - std::pow(2.0, -(double)w);
    } else {
      // top window: digit zero iff the value fits below 2^lo
      total += 1.0 - std::pow(2.0, (double)lo) / q;
    }
  }
  return total;
}

// naive-walk aggregation + combine ops for one full Pippenger run
inline double pippenger_overhead_ops(const FieldConfig& cfg, std::uint32_t w,
                                     std::size_t group_size) {
  const std::uint32_t k = (cfg.bit_width + w - 1) / w;
  const double m = (double)((std::size_t{1} << w) - 1);
  const double g = (double)group_size;
  const double kg = std::ceil(m / g);
  double agg = 2 * m;
  if (kg > 1) {
    agg += (kg - 1) + 2 * (kg - 1) + std::floor(std::log2(g)) +
           (double)__builtin_popcountll(group_size) - 1 + 1;
  }
  return (double)k * agg + (double)(k - 1) * (w + 1) + 1;
}

inline double dense_msm_padds(const FieldConfig& cfg, std::size_t n,
                              std::uint32_t w) {
  return (double)n * expected_nonzero_digits(cfg, w) +
         pippenger_overhead_ops(cfg, w, kAggGroupSize);
}

}  // namespace detail

inline CensusReport analytical_census(std::uint32_t mu, const FieldConfig& cfg) {
  CensusReport r;
  const double n = (double)(std::uint64_t{1} << mu);
  const double sb = (double)cfg.canonical_bytes();
  const double pb = 2.0 * 48.0;

  auto zc = sumcheck::Composition::zero_check();
  auto pc = sumcheck::Composition::perm_check(FieldElement::one(cfg));
  auto oc = sumcheck::Composition::open_check();
  auto round_tail = [](const sumcheck::Composition& comp) {
    double tail = 0;
    for (const auto& term : comp.terms)
      tail += (double)(comp.max_degree - term.degree()) * (term.degree() + 1);
    return tail;
  };

  double witness = 3.0 * kPaddModmuls *
                   detail::dense_msm_padds(cfg, std::size_t{1} << mu,
                                           std::min(kWitnessWindow, cfg.bit_width));
  r.push_back({"witness_msms", witness, 3 * n * (sb + pb), 3 * 97.0});

  double wire = kPaddModmuls *
                (detail::dense_msm_padds(cfg, std::size_t{1} << mu,
                                         std::min(kWireWindow, cfg.bit_width)) +
                 detail::dense_msm_padds(cfg, std::size_t{2} << mu,
                                         std::min(kWireWindow, cfg.bit_width)));
  r.push_back({"wire_identity_msms", wire, 3 * n * (sb + pb), 2 * 97.0});

  double open = 0;
  for (std::uint32_t s = mu; s-- > 0;)
    open += detail::dense_msm_padds(cfg, std::size_t{1} << s,
                                    std::min(kOpenWindow, cfg.bit_width));
  r.push_back({"poly_open_msms", open * kPaddModmuls, n * (sb + pb), 97.0 * mu});

  double insts = n - 1;
  r.push_back({"zerocheck_rounds",
               (double)zc.muls_per_instance() * insts + round_tail(zc) * mu,
               9 * 2 * n * sb, 0});
  r.push_back({"permcheck_rounds",
               (double)pc.muls_per_instance() * insts + round_tail(pc) * mu,
               11 * 2 * n * sb, 0});
  r.push_back({"opencheck_rounds",
               (double)oc.muls_per_instance() * insts + round_tail(oc) * mu,
               12 * 2 * n * sb, 0});
  r.push_back({"mle_updates", 32.0 * insts, 32.0 * 2 * n * sb, 32.0 * n * sb});
  r.push_back({"build_eq", 2.0 * n - 4, (double)mu * sb, n * sb});
  r.push_back({"batch_evaluations", 22.0 * insts, 13 * n * sb, 22 * sb});

  double batches = std::ceil(n / (double)kFracBatch);
  double frac = (n - batches) /* forward partials */ +
                2.0 * (n - batches) /* unwind */ + batches /* BEEA folds */ +
                n /* multiply by N */;
  r.push_back({"frac_mle", frac, 2 * n * sb, n * sb});
  r.push_back({"construct_nd", 10.0 * n, 9 * n * sb, 8 * n * sb});
  r.push_back({"prod_mle", n - 1, n * sb, n * sb});
  r.push_back({"linear_combine", 18.0 * n, 13 * n * sb, 6 * n * sb});
  return r;
}

// ---------------------------------------------------------------------------
// Functional (instrumented) census.  Runs each kernel standalone under the
// reference conventions with seeded random data.
// ---------------------------------------------------------------------------

inline CensusReport functional_census(std::uint32_t mu, const FieldConfig& cfg,
                                      const ec::CurveConfig& curve,
                                      std::uint64_t seed = 1) {
  if (mu > 16) throw perf::PerfError("functional census is desk-scale (mu <= 16)");
  CensusReport r;
  std::mt19937_64 rng(seed);
  const std::size_t n = std::size_t{1} << mu;

  // cheap correlated bases: census counts depend only on scalar digits
  std::vector<ec::CurvePoint> bases;
  {
    auto g = ec::generator_point(curve);
    auto step = ec::scalar_mul_u64(0x9e3779b9, g);
    auto cur = g;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      bases.push_back(cur);
      cur = ec::padd(cur, step);
    }
    bases = ec::batch_normalize(bases);
  }

  auto rand_scalars = [&](std::size_t count) {
    std::vector<FieldElement> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(FieldElement::random(cfg, rng));
    return out;
  };
  auto run_msm = [&](std::size_t count, std::uint32_t window) {
    msm::MsmInstance inst;
    inst.window_size = std::min(window, cfg.bit_width);
    inst.scalars = rand_scalars(count);
    inst.points.assign(bases.begin(), bases.begin() + count);
    msm::pippenger(inst, curve, nullptr, 16);
  };

  {
    fp::ModmulCounter c;
    fp::ModmulScope scope(c);
    for (int i = 0; i < 3; ++i) run_msm(n, kWitnessWindow);
    r.push_back({"witness_msms", (double)c.count, 0, 0});
  }
  {
    fp::ModmulCounter c;
    fp::ModmulScope scope(c);
    run_msm(n, kWireWindow);
    run_msm(2 * n, kWireWindow);
    r.push_back({"wire_identity_msms", (double)c.count, 0, 0});
  }
  {
    fp::ModmulCounter c;
    fp::ModmulScope scope(c);
    for (std::uint32_t s = mu; s-- > 0;) run_msm(std::size_t{1} << s, kOpenWindow);
    r.push_back({"poly_open_msms", (double)c.count, 0, 0});
  }

  auto rand_table = [&](std::uint32_t vars) {
    return MleTable(vars, rand_scalars(std::size_t{1} << vars));
  };
  auto run_sumcheck = [&](const sumcheck::Composition& comp, const char* name,
                          sumcheck::ProveStats& stats) {
    std::vector<MleTable> tables;
    for (std::size_t s = 0; s < comp.num_slots; ++s) tables.push_back(rand_table(mu));
    transcript::Transcript tr;
    sumcheck::prove(comp, std::move(tables), tr, name, nullptr, &stats);
  };
  sumcheck::ProveStats zc_stats, pc_stats, oc_stats;
  run_sumcheck(sumcheck::Composition::zero_check(), "zc", zc_stats);
  run_sumcheck(sumcheck::Composition::perm_check(FieldElement::random(cfg, rng)),
               "pc", pc_stats);
  run_sumcheck(sumcheck::Composition::open_check(), "oc", oc_stats);
  r.push_back({"zerocheck_rounds", (double)zc_stats.round_muls, 0, 0});
  r.push_back({"permcheck_rounds", (double)pc_stats.round_muls, 0, 0});
  r.push_back({"opencheck_rounds", (double)oc_stats.round_muls, 0, 0});
  r.push_back({"mle_updates",
               (double)(zc_stats.update_muls + pc_stats.update_muls +
                        oc_stats.update_muls),
               0, 0});

  {
    fp::ModmulCounter c;
    fp::ModmulScope scope(c);
    mle::build_eq(rand_scalars(mu));
    r.push_back({"build_eq", (double)c.count, 0, 0});
  }
  {
    auto t = rand_table(mu);
    fp::ModmulCounter c;
    fp::ModmulScope scope(c);
    for (int i = 0; i < 22; ++i) mle::evaluate(t, rand_scalars(mu));
    r.push_back({"batch_evaluations", (double)c.count, 0, 0});
  }
  {
    auto nt = rand_table(mu);
    std::vector<FieldElement> de;
    for (std::size_t i = 0; i < n; ++i) {
      auto d = FieldElement::random(cfg, rng);
      while (d.is_zero()) d = FieldElement::random(cfg, rng);
      de.push_back(d);
    }
    MleTable dt(mu, de);
    fp::ModmulCounter c;
    fp::ModmulScope scope(c);
    permwire::frac_mle(nt, dt, kFracBatch);
    r.push_back({"frac_mle", (double)c.count, 0, 0});
  }
  {
    // construct N&D over random wiring-shaped tables: count the arithmetic
    auto w0 = rand_table(mu), w1 = rand_table(mu), w2 = rand_table(mu);
    auto s0 = rand_table(mu), s1 = rand_table(mu), s2 = rand_table(mu);
    auto beta = FieldElement::random(cfg, rng);
    auto gamma = FieldElement::random(cfg, rng);
    fp::ModmulCounter c;
    fp::ModmulScope scope(c);
    const MleTable* w[3] = {&w0, &w1, &w2};
    const MleTable* s[3] = {&s0, &s1, &s2};
    std::vector<std::vector<FieldElement>> nps(3), dps(3);
    for (int j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        nps[j].push_back((*w[j])[i] + beta * (*s[j])[i] + gamma);
        dps[j].push_back((*w[j])[i] + beta * (*s[j])[i] + gamma);
      }
    for (std::size_t i = 0; i < n; ++i) {
      (void)(nps[0][i] * nps[1][i] * nps[2][i]);
      (void)(dps[0][i] * dps[1][i] * dps[2][i]);
    }
    r.push_back({"construct_nd", (double)c.count, 0, 0});
  }
  {
    auto phi = rand_table(mu);
    fp::ModmulCounter c;
    fp::ModmulScope scope(c);
    mle::product_tree(phi.entries);
    r.push_back({"prod_mle", (double)c.count, 0, 0});
  }
  {
    auto tables = std::vector<MleTable>();
    for (int i = 0; i < 13; ++i) tables.push_back(rand_table(mu));
    auto cc = FieldElement::random(cfg, rng);
    fp::ModmulCounter c;
    fp::ModmulScope scope(c);
    auto coeff = FieldElement::one(cfg);
    for (int y = 0; y < 6; ++y) {
      std::vector<FieldElement> acc(n, FieldElement::zero(cfg));
      for (int t = 0; t < 3; ++t) {
        for (std::size_t i = 0; i < n; ++i) acc[i] += coeff * tables[(3 * y + t) % 13][i];
        coeff *= cc;
      }
    }
    r.push_back({"linear_combine", (double)c.count, 0, 0});
  }
  return r;
}

}  // namespace zkspeed::census
