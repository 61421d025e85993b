#include <gtest/gtest.h>

#include <random>

#include "zkspeed/msm.hpp"

using namespace zkspeed;
using namespace zkspeed::msm;
using ec::CurveConfig;
using ec::CurvePoint;
using fp::FieldElement;

namespace {

class MsmToy : public ::testing::Test {
 protected:
  void SetUp() override {
    curve = ec::toy_curve_17();
    g = ec::generator_point(*curve);
    // all 18 points of the toy group, normalized to Z = 1
    points.push_back(ec::identity_point(*curve));
    auto p = g;
    for (int i = 1; i < 18; ++i) {
      points.push_back(p);
      p = ec::padd(p, g);
    }
    points = ec::batch_normalize(points);
  }

  MsmInstance random_instance(std::mt19937_64& rng, std::size_t n,
                              std::uint32_t window) {
    MsmInstance inst;
    inst.window_size = window;
    for (std::size_t i = 0; i < n; ++i) {
      inst.scalars.push_back(
          FieldElement::from_u64(curve->scalar_field, rng() % 17));
      inst.points.push_back(points[1 + rng() % 17]);  // non-identity bases
    }
    return inst;
  }

  std::shared_ptr<CurveConfig> curve;
  CurvePoint g{};
  std::vector<CurvePoint> points;
};

}  // namespace

TEST_F(MsmToy, NaiveTrivialCases) {
  MsmInstance inst;
  inst.window_size = 3;
  inst.scalars = {FieldElement::from_u64(curve->scalar_field, 0),
                  FieldElement::from_u64(curve->scalar_field, 0)};
  inst.points = {points[1], points[2]};
  EXPECT_TRUE(msm_naive(inst, *curve).is_identity());

  inst.scalars = {FieldElement::from_u64(curve->scalar_field, 1)};
  inst.points = {points[3]};
  EXPECT_EQ(msm_naive(inst, *curve), points[3]);

  inst.scalars = {FieldElement::from_u64(curve->scalar_field, 2),
                  FieldElement::from_u64(curve->scalar_field, 3)};
  inst.points = {points[1], points[1]};  // [2]G + [3]G = [5]G
  EXPECT_EQ(msm_naive(inst, *curve), ec::scalar_mul_u64(5, g));
}

TEST_F(MsmToy, LengthMismatchRejected) {
  MsmInstance inst;
  inst.scalars = {FieldElement::from_u64(curve->scalar_field, 1)};
  EXPECT_THROW(msm_naive(inst, *curve), MsmError);
}

TEST_F(MsmToy, PippengerSingleWindowAndOnes) {
  MsmInstance inst;
  inst.window_size = 5;  // one window covers the 5-bit scalar field
  inst.scalars = {FieldElement::from_u64(curve->scalar_field, 13)};
  inst.points = {points[4]};
  EXPECT_EQ(pippenger(inst, *curve), ec::scalar_mul_u64(13, points[4]));

  MsmInstance ones;
  ones.window_size = 2;
  auto want = ec::identity_point(*curve);
  for (int i = 1; i <= 6; ++i) {
    ones.scalars.push_back(FieldElement::from_u64(curve->scalar_field, 1));
    ones.points.push_back(points[i]);
    want = ec::padd(want, points[i]);
  }
  EXPECT_EQ(pippenger(ones, *curve), want);
}

TEST_F(MsmToy, PippengerEqualsNaiveRandomized) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 512;
    std::uint32_t w = 2 + rng() % 3;  // W in {2,3,4}
    auto inst = random_instance(rng, n, w);
    EXPECT_EQ(pippenger(inst, *curve), msm_naive(inst, *curve))
        << "trial=" << trial << " n=" << n << " w=" << w;
  }
}

TEST_F(MsmToy, PippengerExhaustiveTinyInstances) {
  // all instances of length <= 8 drawn from 3-bit scalars, fixed bases
  std::mt19937_64 rng(102);
  for (std::size_t len = 1; len <= 8; ++len) {
    for (int rep = 0; rep < 40; ++rep) {
      MsmInstance inst;
      inst.window_size = 3;
      for (std::size_t i = 0; i < len; ++i) {
        inst.scalars.push_back(
            FieldElement::from_u64(curve->scalar_field, rng() % 8));
        inst.points.push_back(points[1 + rng() % 17]);
      }
      EXPECT_EQ(pippenger(inst, *curve), msm_naive(inst, *curve));
    }
  }
}

TEST_F(MsmToy, OpLogMatchesClosedFormCounts) {
  std::mt19937_64 rng(103);
  for (std::uint32_t w : {2u, 3u, 4u}) {
    auto inst = random_instance(rng, 100, w);
    OpLog log;
    PippengerCounts counts;
    pippenger(inst, *curve, &log, 4, &counts);
    auto expect = pippenger_expected_counts(inst, 4);
    EXPECT_EQ(counts.bucket_adds, expect.bucket_adds);
    EXPECT_EQ(counts.aggregation_ops, expect.aggregation_ops);
    EXPECT_EQ(counts.combine_doublings, expect.combine_doublings);
    EXPECT_EQ(counts.combine_adds, expect.combine_adds);
    EXPECT_EQ(log.records.size(), expect.total());
    EXPECT_EQ(log.count(Phase::bucket), expect.bucket_adds);
  }
}

TEST_F(MsmToy, AggregateBucketsIdentityAndOneGroup) {
  std::size_t m = 7;
  std::vector<CurvePoint> buckets(m, ec::identity_point(*curve));
  EXPECT_TRUE(aggregate_buckets(buckets, 3, *curve).is_identity());

  // g = m: same value and same op sequence as the naive running sum
  std::mt19937_64 rng(104);
  for (std::size_t i = 0; i < m; ++i) buckets[i] = points[1 + rng() % 17];
  OpLog grouped_log, naive_log;
  AggSchedule s1, s2;
  auto a = aggregate_buckets(buckets, m, *curve, &grouped_log, 0, &s1);
  auto b = aggregate_buckets(buckets, m, *curve, &naive_log, 0, &s2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(s1.ops, 2 * m);
  EXPECT_EQ(s1.critical_path, 2 * m);
}

TEST_F(MsmToy, AggregateBucketsWeightedSumOracle) {
  // W=3: B_i = [i]G, sum i*B_i = [sum i^2]G = [140]G
  std::vector<CurvePoint> buckets;
  for (int i = 1; i <= 7; ++i) buckets.push_back(ec::scalar_mul_u64(i, g));
  auto want = ec::scalar_mul_u64(140, g);
  EXPECT_EQ(aggregate_buckets(buckets, 4, *curve), want);
  EXPECT_EQ(aggregate_buckets(buckets, 7, *curve), want);
}

TEST_F(MsmToy, AggregateGroupedEqualsNaiveAllGroupSizes) {
  std::mt19937_64 rng(105);
  for (std::uint32_t w = 2; w <= 5; ++w) {
    std::size_t m = (std::size_t{1} << w) - 1;
    std::vector<CurvePoint> buckets;
    for (std::size_t i = 0; i < m; ++i) {
      // mix of identity (empty) and live buckets
      buckets.push_back(rng() % 3 == 0 ? ec::identity_point(*curve)
                                       : points[1 + rng() % 17]);
    }
    auto naive = aggregate_buckets(buckets, m, *curve);
    for (std::size_t gsz = 1; gsz <= m; ++gsz)
      EXPECT_EQ(aggregate_buckets(buckets, gsz, *curve), naive)
          << "w=" << w << " g=" << gsz;
  }
}

TEST_F(MsmToy, GroupedCriticalPathShorterForLargeWindows) {
  // schedule-level critical path, dense bucket occupancy
  double total_reduction = 0;
  for (std::uint32_t w = 7; w <= 10; ++w) {
    std::size_t m = (std::size_t{1} << w) - 1;
    std::vector<CurvePoint> buckets(m, points[1]);
    AggSchedule naive, grouped;
    aggregate_buckets(buckets, m, *curve, nullptr, 0, &naive);
    aggregate_buckets(buckets, 16, *curve, nullptr, 0, &grouped);
    EXPECT_LT(grouped.critical_path, naive.critical_path) << "w=" << w;
    total_reduction +=
        1.0 - (double)grouped.critical_path / (double)naive.critical_path;
  }
  double avg = total_reduction / 4.0;
  EXPECT_GE(avg, 0.85);
  EXPECT_LE(avg, 0.95);
}

TEST_F(MsmToy, SparseAllOnesIsPureTree) {
  MsmInstance inst;
  inst.window_size = 3;
  auto want = ec::identity_point(*curve);
  for (int i = 1; i <= 7; ++i) {
    inst.scalars.push_back(FieldElement::from_u64(curve->scalar_field, 1));
    inst.points.push_back(points[i]);
    want = ec::padd(want, points[i]);
  }
  OpLog log;
  auto got = msm_sparse(inst, tally_scalars(inst.scalars), *curve, &log);
  EXPECT_EQ(got, want);
  EXPECT_EQ(log.count(Phase::sparse_tree), 6u);  // n-1 tree adds
  EXPECT_EQ(log.count(Phase::bucket), 0u);
}

TEST_F(MsmToy, SparseAllZerosIsFree) {
  MsmInstance inst;
  inst.window_size = 3;
  for (int i = 1; i <= 5; ++i) {
    inst.scalars.push_back(FieldElement::from_u64(curve->scalar_field, 0));
    inst.points.push_back(points[i]);
  }
  OpLog log;
  auto got = msm_sparse(inst, tally_scalars(inst.scalars), *curve, &log);
  EXPECT_TRUE(got.is_identity());
  EXPECT_TRUE(log.records.empty());
}

TEST_F(MsmToy, SparseEqualsNaiveWithPaperSplit) {
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 100; ++trial) {
    MsmInstance inst;
    inst.window_size = 3;
    std::size_t n = 20 + rng() % 200;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t roll = rng() % 100;
      std::uint64_t s = roll < 45 ? 0 : roll < 90 ? 1 : 2 + rng() % 15;
      inst.scalars.push_back(FieldElement::from_u64(curve->scalar_field, s));
      inst.points.push_back(points[1 + rng() % 17]);
    }
    auto want = msm_naive(inst, *curve);
    EXPECT_EQ(msm_sparse(inst, tally_scalars(inst.scalars), *curve), want);
    EXPECT_EQ(pippenger(inst, *curve), want);
  }
}

TEST_F(MsmToy, SparseTallyValidated) {
  MsmInstance inst;
  inst.window_size = 3;
  inst.scalars = {FieldElement::from_u64(curve->scalar_field, 1)};
  inst.points = {points[1]};
  SparsityTally bad{1, 0, 0};
  EXPECT_THROW(msm_sparse(inst, bad, *curve), MsmError);
}

TEST(MsmBls, PippengerEqualsNaiveOnG1) {
  auto curve = ec::bls12_381_g1();
  auto g = ec::generator_point(*curve);
  std::mt19937_64 rng(107);
  std::vector<CurvePoint> bases;
  for (int i = 0; i < 32; ++i)
    bases.push_back(ec::scalar_mul_u64(1 + (rng() & 0xffff), g));
  bases = ec::batch_normalize(bases);

  MsmInstance inst;
  inst.window_size = 6;
  for (int i = 0; i < 32; ++i) {
    inst.scalars.push_back(FieldElement::random(curve->scalar_field, rng));
    inst.points.push_back(bases[i]);
  }
  EXPECT_EQ(pippenger(inst, *curve), msm_naive(inst, *curve));
  EXPECT_EQ(msm_sparse(inst, tally_scalars(inst.scalars), *curve),
            msm_naive(inst, *curve));
}
