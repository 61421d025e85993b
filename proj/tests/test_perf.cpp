#include <gtest/gtest.h>

#include <cmath>

#include "zkspeed/census.hpp"
#include "zkspeed/perf.hpp"

using namespace zkspeed;
using namespace zkspeed::perf;

namespace {

DesignPoint reference_design() { return DesignPoint{}; }

bool near2(double got, double want) { return std::abs(got - want) < 5e-7; }

}  // namespace

TEST(Table2, CrossProductSize) {
  KnobDomains domains;
  EXPECT_EQ(domains.cross_product_size(), 577500u);
}

TEST(Rollup, ReferenceDesignReproducesPrintedRows) {
  CostTables cost;
  auto r = area_power_rollup(reference_design(), 20, cost);
  EXPECT_TRUE(near2(r.area.msm, 105.64));
  EXPECT_TRUE(near2(r.area.sumcheck, 24.96));
  EXPECT_TRUE(near2(r.area.nd, 1.35));
  EXPECT_TRUE(near2(r.area.fracmle, 1.92));
  EXPECT_TRUE(near2(r.area.combine, 9.56));
  EXPECT_TRUE(near2(r.area.update, 5.84));
  EXPECT_TRUE(near2(r.area.tree, 12.28));
  EXPECT_TRUE(near2(r.area.other, 1.98));
  EXPECT_TRUE(near2(r.area.compute, 163.53)) << r.area.compute;
  EXPECT_TRUE(near2(r.area.sram, 143.73)) << r.area.sram;
  EXPECT_TRUE(near2(r.area.phy, 59.20));
  EXPECT_TRUE(near2(r.area.memory, 202.93)) << r.area.memory;
  EXPECT_TRUE(near2(r.area.total, 366.46)) << r.area.total;

  EXPECT_TRUE(near2(r.power.msm, 76.19));
  EXPECT_TRUE(near2(r.power.sumcheck, 5.38));
  EXPECT_TRUE(near2(r.power.nd, 0.19));
  EXPECT_TRUE(near2(r.power.fracmle, 0.25));
  EXPECT_TRUE(near2(r.power.combine, 0.34));
  EXPECT_TRUE(near2(r.power.update, 1.13));
  EXPECT_TRUE(near2(r.power.tree, 4.16));
  EXPECT_TRUE(near2(r.power.other, 0.04));
  EXPECT_TRUE(near2(r.power.compute, 87.68)) << r.power.compute;
  EXPECT_TRUE(near2(r.power.sram, 19.60));
  EXPECT_TRUE(near2(r.power.phy, 63.60));
  EXPECT_TRUE(near2(r.power.memory, 83.20)) << r.power.memory;
  EXPECT_TRUE(near2(r.power.total, 170.88)) << r.power.total;
}

TEST(Rollup, OffDomainKnobRejectedAndZeroPeBase) {
  CostTables cost;
  auto d = reference_design();
  d.msm_pes = 3;
  EXPECT_THROW(area_power_rollup(d, 20, cost), PerfError);
  // zero-PE hypothetical: fixed blocks only (non-strict mode)
  DesignPoint zero{};
  zero.msm_pes = 0;
  zero.sumcheck_pes = 0;
  zero.fracmle_pes = 0;
  zero.mle_update_pes = 0;
  auto r = area_power_rollup(zero, 20, cost, false);
  EXPECT_TRUE(near2(r.area.msm, 0));
  EXPECT_TRUE(near2(r.area.sumcheck, 0));
  double base = cost.nd_area + cost.combine_area + cost.tree_area + cost.other_area;
  EXPECT_TRUE(near2(r.area.compute, base));
}

TEST(BatchOptimizer, DefaultsGiveSixtyFour) {
  CostTables cost;
  auto r = fracmle_batch_optimizer(cost);
  EXPECT_EQ(r.best_n, 64u);
  for (std::size_t i = 0; i < r.batch_sizes.size(); ++i) {
    if (r.batch_sizes[i] == 64) EXPECT_EQ(r.units[i], 12u);
    if (r.batch_sizes[i] == 2) EXPECT_EQ(r.units[i], 256u);
  }
}

TEST(BatchOptimizer, SlowerInversionPushesBatchUp) {
  CostTables cost;
  cost.beea_latency *= 4;
  auto r = fracmle_batch_optimizer(cost);
  EXPECT_GT(r.best_n, 64u);
}

TEST(AggregationModel, GroupedBeatsNaiveAcrossWindows) {
  CostTables cost;
  double total = 0;
  for (std::uint32_t w = 7; w <= 10; ++w) {
    auto naive = aggregation_latency(w, 16, cost, false);
    auto grouped = aggregation_latency(w, 16, cost, true);
    EXPECT_LT(grouped.cycles, naive.cycles) << "w=" << w;
    total += 1.0 - grouped.cycles / naive.cycles;
  }
  double avg = total / 4.0;
  EXPECT_GE(avg, 0.85) << avg;
  EXPECT_LE(avg, 0.95) << avg;
}

TEST(MsmModel, SmallMsmAggregationDominanceFlag) {
  CostTables cost;
  auto d = reference_design();
  auto grouped = msm_cycle_model(32, 0, 0, 1.0, d, cost, true);
  EXPECT_FALSE(grouped.aggregation_dominates)
      << grouped.aggregation / grouped.total;
  auto naive = msm_cycle_model(32, 0, 0, 1.0, d, cost, false);
  EXPECT_TRUE(naive.aggregation_dominates);
}

TEST(MsmModel, PeScalingNearLinear) {
  CostTables cost;
  auto d = reference_design();
  d.bandwidth_gbps = 4096;  // keep compute-bound
  for (std::uint32_t pes : {1u, 2u, 4u, 8u}) {
    auto base = d;
    base.msm_pes = pes;
    auto dbl = d;
    dbl.msm_pes = pes * 2;
    auto a = msm_cycle_model(std::size_t{1} << 20, 0, 0, 1.0, base, cost);
    auto b = msm_cycle_model(std::size_t{1} << 20, 0, 0, 1.0, dbl, cost);
    EXPECT_GE(a.total / b.total, 1.8) << "pes=" << pes;
  }
}

TEST(MsmModel, ComputeBoundAboveBandwidthFloor) {
  CostTables cost;
  auto d = reference_design();
  auto lo = d;
  lo.bandwidth_gbps = 512;
  auto hi = d;
  hi.bandwidth_gbps = 4096;
  auto a = msm_cycle_model(std::size_t{1} << 20, 0, 0, 1.0, lo, cost);
  auto b = msm_cycle_model(std::size_t{1} << 20, 0, 0, 1.0, hi, cost);
  EXPECT_NEAR(a.total / b.total, 1.0, 0.05);
}

TEST(MsmModel, OpLogDrivenSimAgreesOnToyInstance) {
  // desk-scale: feed a real functional op log through the sim
  auto curve = ec::toy_curve_17();
  auto g = ec::generator_point(*curve);
  std::mt19937_64 rng(9);
  msm::MsmInstance inst;
  inst.window_size = 3;
  for (int i = 0; i < 64; ++i) {
    inst.scalars.push_back(
        fp::FieldElement::from_u64(curve->scalar_field, 2 + rng() % 15));
    inst.points.push_back(g);
  }
  msm::OpLog log;
  msm::pippenger(inst, *curve, &log, 4);
  CostTables cost;
  auto d = reference_design();
  auto sim = msm_cycle_sim(log, d, cost);
  EXPECT_GT(sim.total, 0);
  EXPECT_GT(sim.bucket, 0);
  EXPECT_GT(sim.aggregation, 0);
}

TEST(SumCheckModel, BandwidthBoundRegimeHalvesWithDoubleBandwidth) {
  CostTables cost;
  auto d = reference_design();
  d.sumcheck_pes = 16;
  d.bandwidth_gbps = 64;  // firmly bandwidth-bound
  auto a = sumcheck_latency(20, sumcheck::CompositionKind::zero_check, d, cost);
  d.bandwidth_gbps = 128;
  auto b = sumcheck_latency(20, sumcheck::CompositionKind::zero_check, d, cost);
  EXPECT_NEAR(a.cycles / b.cycles, 2.0, 0.02);
}

TEST(SumCheckModel, PeSpeedupSaturatesAtFixedBandwidth) {
  CostTables cost;
  auto d = reference_design();
  d.bandwidth_gbps = 4096;
  d.sumcheck_pes = 1;
  auto one = sumcheck_latency(20, sumcheck::CompositionKind::zero_check, d, cost);
  d.sumcheck_pes = 2;
  auto two = sumcheck_latency(20, sumcheck::CompositionKind::zero_check, d, cost);
  d.sumcheck_pes = 16;
  auto sixteen = sumcheck_latency(20, sumcheck::CompositionKind::zero_check, d, cost);
  double s2 = one.cycles / two.cycles;
  double s16 = one.cycles / sixteen.cycles;
  EXPECT_GT(s2, 1.9);          // early scaling is near-linear
  EXPECT_LT(s16, 16.0 * 0.5);  // diminishing returns after saturating bandwidth
  // at low bandwidth the rounds are memory-bound from the start
  d.bandwidth_gbps = 128;
  d.sumcheck_pes = 1;
  auto lo1 = sumcheck_latency(20, sumcheck::CompositionKind::zero_check, d, cost);
  d.sumcheck_pes = 16;
  auto lo16 = sumcheck_latency(20, sumcheck::CompositionKind::zero_check, d, cost);
  EXPECT_LT(lo1.cycles / lo16.cycles, 1.1);
}

TEST(Census, AnalyticalReproducesPaperCountsAtMu20) {
  auto cfg = fp::FieldConfig::bls12_381_scalar();
  auto r = census::analytical_census(20, cfg);
  auto within = [&](const char* kernel, double want) {
    double got = census::find_kernel(r, kernel) / 1e6;
    EXPECT_GE(got, want * 0.75) << kernel << " " << got;
    EXPECT_LE(got, want * 1.25) << kernel << " " << got;
  };
  within("witness_msms", 1370);
  within("wire_identity_msms", 2290);
  within("poly_open_msms", 1160);
  within("zerocheck_rounds", 77.6);
  within("permcheck_rounds", 94.4);
  within("opencheck_rounds", 31.5);
  within("mle_updates", 33.6);
  // ungated rows stay plausible as well
  within("batch_evaluations", 23.1);
  within("construct_nd", 10.5);
  within("prod_mle", 1.05);
  within("linear_combine", 18.9);
}

TEST(Census, BuildEqExactCount) {
  auto cfg = fp::FieldConfig::bls12_381_scalar();
  for (std::uint32_t mu : {4u, 10u, 20u}) {
    auto r = census::analytical_census(mu, cfg);
    EXPECT_EQ(census::find_kernel(r, "build_eq"),
              (double)((std::uint64_t{1} << (mu + 1)) - 4));
  }
}

TEST(Census, FunctionalMatchesAnalyticalWithinOnePercent) {
  auto curve = ec::bls12_381_g1();
  const auto& cfg = curve->scalar_field;
  std::uint32_t mu = 10;
  auto ana = census::analytical_census(mu, cfg);
  auto fun = census::functional_census(mu, cfg, *curve, 3);
  for (const auto& k : fun) {
    double a = census::find_kernel(ana, k.kernel);
    EXPECT_NEAR(k.modmuls / a, 1.0, 0.01) << k.kernel << " functional="
                                          << k.modmuls << " analytical=" << a;
  }
}

TEST(Protocol, StepCompositionIdentity) {
  CostTables cost;
  auto d = reference_design();
  auto s = protocol_latency(20, 0.45, 0.45, 0.10, d, cost);
  double recomposed = s.witness_commit + s.zero_check + s.wire_identity +
                      s.perm_check + std::max(s.batch_eval, s.poly_open);
  EXPECT_DOUBLE_EQ(s.total, recomposed);
  EXPECT_GT(s.total, 0);
}

TEST(Protocol, MonotoneInBandwidthAndPes) {
  CostTables cost;
  KnobDomains domains;
  auto runtime = [&](const DesignPoint& d) {
    return protocol_latency(20, 0.45, 0.45, 0.10, d, cost).total;
  };
  DesignPoint base;
  base.msm_pes = 4;
  base.sumcheck_pes = 4;
  base.mle_update_pes = 5;
  base.bandwidth_gbps = 256;
  // bandwidth sweep
  double prev = std::numeric_limits<double>::infinity();
  for (auto bw : domains.bandwidth_gbps) {
    auto d = base;
    d.bandwidth_gbps = bw;
    double t = runtime(d);
    EXPECT_LE(t, prev + 1e-9) << "bw=" << bw;
    prev = t;
  }
  // each PE knob
  prev = std::numeric_limits<double>::infinity();
  for (auto v : domains.msm_pes) {
    auto d = base;
    d.msm_pes = v;
    double t = runtime(d);
    EXPECT_LE(t, prev + 1e-9) << "msm_pes=" << v;
    prev = t;
  }
  prev = std::numeric_limits<double>::infinity();
  for (auto v : domains.sumcheck_pes) {
    auto d = base;
    d.sumcheck_pes = v;
    double t = runtime(d);
    EXPECT_LE(t, prev + 1e-9) << "sumcheck_pes=" << v;
    prev = t;
  }
  prev = std::numeric_limits<double>::infinity();
  for (auto v : domains.mle_update_pes) {
    auto d = base;
    d.mle_update_pes = v;
    double t = runtime(d);
    EXPECT_LE(t, prev + 1e-9) << "update_pes=" << v;
    prev = t;
  }
  prev = std::numeric_limits<double>::infinity();
  for (auto v : domains.fracmle_pes) {
    auto d = base;
    d.fracmle_pes = v;
    double t = runtime(d);
    EXPECT_LE(t, prev + 1e-9) << "fracmle_pes=" << v;
    prev = t;
  }
}

TEST(Dse, ReducedDomainParetoCorrectness) {
  CostTables cost;
  KnobDomains domains;
  domains.msm_pes = {1, 4, 16};
  domains.msm_window = {8, 10};
  domains.msm_points_per_pe = {2048};
  domains.fracmle_pes = {1};
  domains.sumcheck_pes = {1, 4, 16};
  domains.mle_update_pes = {4, 11};
  domains.modmuls_per_update_pe = {4};
  domains.bandwidth_gbps = {512, 2048};
  auto rows = enumerate_designs(20, domains, cost);
  EXPECT_EQ(rows.size(), domains.cross_product_size());

  // no frontier point is dominated (brute force)
  for (const auto& r : rows) {
    if (!r.pareto_global) continue;
    for (const auto& o : rows) {
      bool dominates = o.area_mm2 <= r.area_mm2 && o.runtime_ms <= r.runtime_ms &&
                       (o.area_mm2 < r.area_mm2 || o.runtime_ms < r.runtime_ms);
      EXPECT_FALSE(dominates);
      if (dominates) break;
    }
  }
  // every non-frontier point is dominated by some frontier point
  std::size_t frontier = 0;
  for (const auto& r : rows) frontier += r.pareto_global;
  EXPECT_GT(frontier, 0u);
  EXPECT_LT(frontier, rows.size());
}

TEST(Dse, BandwidthSpeedupAboveThreeHundred) {
  CostTables cost;
  KnobDomains domains;  // thin the compute axes, keep both target bandwidths
  domains.msm_points_per_pe = {2048};
  domains.modmuls_per_update_pe = {4};
  domains.bandwidth_gbps = {512, 2048};
  auto rows = enumerate_designs(20, domains, cost);

  double best512 = std::numeric_limits<double>::infinity();
  double best2048_above300 = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (!r.pareto_local) continue;
    if (r.design.bandwidth_gbps == 512)
      best512 = std::min(best512, r.runtime_ms);
    if (r.design.bandwidth_gbps == 2048 && r.area_mm2 > 300)
      best2048_above300 = std::min(best2048_above300, r.runtime_ms);
  }
  EXPECT_GE(best512 / best2048_above300, 2.0)
      << "best512=" << best512 << " best2048=" << best2048_above300;
}
