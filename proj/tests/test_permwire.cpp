#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "zkspeed/permwire.hpp"
#include "zkspeed/sumcheck.hpp"

using namespace zkspeed;
using namespace zkspeed::permwire;
using fp::FieldConfig;
using fp::FieldElement;
using mle::MleTable;

namespace {

MleTable table_u64(const FieldConfig& cfg, std::uint32_t mu,
                   std::vector<std::uint64_t> xs) {
  std::vector<FieldElement> e;
  for (auto x : xs) e.push_back(FieldElement::from_u64(cfg, x));
  return MleTable(mu, e);
}

// Honest wiring: slots are grouped into copy classes, every slot in a class
// carries the same value, and sigma cycles each class.
WiringInputs honest_wiring(const FieldConfig& cfg, std::uint32_t mu,
                           std::mt19937_64& rng) {
  std::size_t n = std::size_t{1} << mu;
  std::size_t slots = 3 * n;
  std::vector<std::size_t> order(slots);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::size_t> sigma_flat(slots);
  std::vector<FieldElement> values(slots, FieldElement::zero(cfg));
  std::size_t pos = 0;
  while (pos < slots) {
    std::size_t len = 1 + rng() % std::min<std::size_t>(4, slots - pos);
    auto v = FieldElement::random(cfg, rng);
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t cur = order[pos + i];
      std::size_t nxt = order[pos + (i + 1) % len];
      sigma_flat[cur] = nxt;
      values[cur] = v;
    }
    pos += len;
  }

  WiringInputs in;
  for (int j = 0; j < 3; ++j) {
    std::vector<FieldElement> w, s, id;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t g = j * n + i;
      w.push_back(values[g]);
      s.push_back(FieldElement::from_u64(cfg, sigma_flat[g]));
      id.push_back(FieldElement::from_u64(cfg, g));
    }
    in.w.emplace_back(mu, w);
    in.sigma.emplace_back(mu, s);
    in.id.emplace_back(mu, id);
  }
  in.beta = FieldElement::random(cfg, rng);
  in.gamma = FieldElement::random(cfg, rng);
  return in;
}

FieldElement table_product(const MleTable& t) {
  auto acc = FieldElement::one(t[0].config());
  for (std::size_t i = 0; i < t.size(); ++i) acc *= t[i];
  return acc;
}

}  // namespace

TEST(ConstructNd, ChallengeFreeDegeneracy) {
  auto f = FieldConfig::from_u64(97);
  std::mt19937_64 rng(601);
  auto in = honest_wiring(f, 2, rng);
  in.beta = FieldElement::zero(f);
  in.gamma = FieldElement::zero(f);
  auto nd = construct_nd(in);
  for (int j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < in.w[j].size(); ++i) {
      EXPECT_EQ(nd.n_parts[j][i], in.w[j][i]);
      EXPECT_EQ(nd.d_parts[j][i], in.w[j][i]);
    }
  for (std::size_t i = 0; i < nd.n.size(); ++i) EXPECT_EQ(nd.n[i], nd.d[i]);
}

TEST(ConstructNd, IdentityPermutationMakesNEqualD) {
  auto f = FieldConfig::from_u64(97);
  std::mt19937_64 rng(602);
  auto in = honest_wiring(f, 3, rng);
  in.sigma = in.id;  // identity wiring
  for (int trial = 0; trial < 5; ++trial) {
    in.beta = FieldElement::random(f, rng);
    in.gamma = FieldElement::random(f, rng);
    auto nd = construct_nd(in);
    for (std::size_t i = 0; i < nd.n.size(); ++i) EXPECT_EQ(nd.n[i], nd.d[i]);
  }
}

TEST(ConstructNd, HandFormulaSmallCase) {
  // q=97, mu=1, w_0=[2,3], beta=1, gamma=1:
  // D_0[i] = w_0[i] + sigma_0[i] + 1
  auto f = FieldConfig::from_u64(97);
  std::mt19937_64 rng(603);
  auto in = honest_wiring(f, 1, rng);
  in.w[0] = table_u64(f, 1, {2, 3});
  in.beta = FieldElement::from_u64(f, 1);
  in.gamma = FieldElement::from_u64(f, 1);
  auto nd = construct_nd(in);
  for (std::size_t i = 0; i < 2; ++i) {
    auto want = in.w[0][i] + in.sigma[0][i] + FieldElement::one(f);
    EXPECT_EQ(nd.d_parts[0][i], want);
    auto wantn = in.w[0][i] + in.id[0][i] + FieldElement::one(f);
    EXPECT_EQ(nd.n_parts[0][i], wantn);
  }
}

TEST(ConstructNd, MismatchedMuRejected) {
  auto f = FieldConfig::from_u64(97);
  std::mt19937_64 rng(604);
  auto in = honest_wiring(f, 2, rng);
  in.w[1] = MleTable::zeros(f, 3);
  EXPECT_THROW(construct_nd(in), WiringError);
}

TEST(ConstructNd, NonPermutationSigmaRejected) {
  auto f = FieldConfig::from_u64(97);
  std::mt19937_64 rng(605);
  auto in = honest_wiring(f, 2, rng);
  in.sigma[0][0] = in.sigma[0][1];  // duplicate image
  EXPECT_THROW(construct_nd(in), WiringError);
}

TEST(FracMle, HandExampleMod17) {
  auto f = FieldConfig::from_u64(17);
  auto n = table_u64(f, 1, {4, 3});
  auto d = table_u64(f, 1, {2, 3});
  auto phi = frac_mle(n, d);
  EXPECT_EQ(phi[0].canonical_u64(), 2u);  // 4 * inv(2) = 4*9 = 36 = 2
  EXPECT_EQ(phi[1].canonical_u64(), 1u);
}

TEST(FracMle, EqualTablesGiveOnes) {
  auto f = FieldConfig::bls12_381_scalar();
  std::mt19937_64 rng(606);
  std::vector<FieldElement> e;
  for (int i = 0; i < 8; ++i) {
    auto x = FieldElement::random(f, rng);
    while (x.is_zero()) x = FieldElement::random(f, rng);
    e.push_back(x);
  }
  MleTable t(3, e);
  auto phi = frac_mle(t, t);
  for (std::size_t i = 0; i < phi.size(); ++i)
    EXPECT_EQ(phi[i], FieldElement::one(f));
}

TEST(FracMle, BatchSizeInvariance) {
  auto f = FieldConfig::bls12_381_scalar();
  std::mt19937_64 rng(607);
  std::uint32_t mu = 7;  // 128 entries
  std::vector<FieldElement> ne, de;
  for (std::size_t i = 0; i < (std::size_t{1} << mu); ++i) {
    ne.push_back(FieldElement::random(f, rng));
    auto d = FieldElement::random(f, rng);
    while (d.is_zero()) d = FieldElement::random(f, rng);
    de.push_back(d);
  }
  MleTable n(mu, ne), d(mu, de);
  auto ref = frac_mle(n, d, 1);
  for (std::size_t bs = 2; bs <= 128; ++bs) {
    auto phi = frac_mle(n, d, bs);
    for (std::size_t i = 0; i < phi.size(); ++i) EXPECT_EQ(phi[i], ref[i]);
  }
  // element-wise phi * D = N
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(ref[i] * d[i], n[i]);
}

TEST(FracMle, ZeroDenominatorNamesIndex) {
  auto f = FieldConfig::from_u64(97);
  auto n = table_u64(f, 2, {1, 2, 3, 4});
  auto d = table_u64(f, 2, {5, 6, 0, 7});
  try {
    frac_mle(n, d);
    FAIL() << "expected NonInvertibleError";
  } catch (const fp::NonInvertibleError& e) {
    EXPECT_EQ(e.index, 2u);
  }
}

TEST(BuildProduct, AllOnes) {
  auto f = FieldConfig::from_u64(97);
  auto phi = table_u64(f, 2, {1, 1, 1, 1});
  auto ps = build_product(phi);
  EXPECT_EQ(ps.pi[0].canonical_u64(), 1u);
  EXPECT_EQ(ps.pi[1].canonical_u64(), 1u);
  EXPECT_EQ(ps.pi[ps.root_slot].canonical_u64(), 1u);
  EXPECT_TRUE(ps.pi[3].is_zero());  // final slot convention
}

TEST(BuildProduct, HandExampleMod97) {
  auto f = FieldConfig::from_u64(97);
  auto phi = table_u64(f, 2, {2, 3, 4, 5});
  auto ps = build_product(phi);
  EXPECT_EQ(ps.pi[0].canonical_u64(), 6u);
  EXPECT_EQ(ps.pi[1].canonical_u64(), 20u);
  EXPECT_EQ(ps.pi[2].canonical_u64(), 23u);  // 120 mod 97, the root
  EXPECT_EQ(ps.root_slot, 2u);
  EXPECT_TRUE(ps.pi[3].is_zero());
  // constraint pi(x) = v(x,0) * v(x,1) = p1(x) * p2(x) on every slot
  for (std::size_t x = 0; x < ps.pi.size(); ++x)
    EXPECT_EQ(ps.pi[x], ps.p1[x] * ps.p2[x]) << "x=" << x;
  // v layout: first half phi, second half pi
  for (std::size_t i = 0; i < phi.size(); ++i) {
    EXPECT_EQ(ps.v[i], phi[i]);
    EXPECT_EQ(ps.v[i + phi.size()], ps.pi[i]);
  }
}

TEST(BuildProduct, ConstraintHoldsRandom) {
  auto f = FieldConfig::bls12_381_scalar();
  std::mt19937_64 rng(608);
  for (std::uint32_t mu = 1; mu <= 6; ++mu) {
    std::vector<FieldElement> e;
    for (std::size_t i = 0; i < (std::size_t{1} << mu); ++i)
      e.push_back(FieldElement::random(f, rng));
    MleTable phi(mu, e);
    auto ps = build_product(phi);
    for (std::size_t x = 0; x < ps.pi.size(); ++x)
      EXPECT_EQ(ps.pi[x], ps.p1[x] * ps.p2[x]);
    EXPECT_EQ(ps.pi[ps.root_slot], table_product(phi));
  }
}

TEST(WiringPipeline, HonestPermutationGivesUnitRoot) {
  auto f = FieldConfig::bls12_381_scalar();
  std::mt19937_64 rng(609);
  for (std::uint32_t mu : {1u, 2u, 4u, 6u}) {
    auto in = honest_wiring(f, mu, rng);
    auto nd = construct_nd(in);
    EXPECT_EQ(table_product(nd.n), table_product(nd.d));
    auto phi = frac_mle(nd.n, nd.d);
    EXPECT_EQ(table_product(phi), FieldElement::one(f));
    auto ps = build_product(phi);
    EXPECT_EQ(ps.pi[ps.root_slot], FieldElement::one(f));
  }
}

TEST(WiringPipeline, BrokenTranspositionCaughtWithHighProbability) {
  auto f = FieldConfig::bls12_381_scalar();
  std::mt19937_64 rng(610);
  int caught = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    auto in = honest_wiring(f, 3, rng);
    // swap two sigma images whose source values differ
    for (;;) {
      std::size_t a = rng() % in.w[0].size(), b = rng() % in.w[0].size();
      int ja = rng() % 3, jb = rng() % 3;
      if (in.w[ja][a] != in.w[jb][b]) {
        std::swap(in.sigma[ja][a], in.sigma[jb][b]);
        break;
      }
    }
    auto nd = construct_nd(in);
    bool zero_denominator = false;
    for (std::size_t i = 0; i < nd.d.size(); ++i)
      zero_denominator |= nd.d[i].is_zero();
    if (zero_denominator) {
      ++caught;  // resample path in the protocol layer
      continue;
    }
    auto phi = frac_mle(nd.n, nd.d);
    if (table_product(phi) != FieldElement::one(f)) ++caught;
  }
  EXPECT_GE(caught, 99);
}

TEST(WiringPipeline, PermCheckCompositionSumsToZeroExhaustive) {
  auto f = FieldConfig::bls12_381_scalar();
  std::mt19937_64 rng(611);
  for (std::uint32_t mu = 1; mu <= 4; ++mu) {
    auto in = honest_wiring(f, mu, rng);
    auto nd = construct_nd(in);
    auto phi = frac_mle(nd.n, nd.d);
    auto ps = build_product(phi);

    std::vector<FieldElement> r;
    for (std::uint32_t j = 0; j < mu; ++j) r.push_back(FieldElement::random(f, rng));
    auto fz2 = mle::build_eq(r);

    auto alpha = FieldElement::random(f, rng);
    auto comp = sumcheck::Composition::perm_check(alpha);
    std::vector<MleTable> tables = {ps.pi,          fz2.table,      ps.p1,
                                    ps.p2,          phi,            nd.d_parts[0],
                                    nd.d_parts[1],  nd.d_parts[2],  nd.n_parts[0],
                                    nd.n_parts[1],  nd.n_parts[2]};
    auto sum = FieldElement::zero(f);
    for (std::size_t i = 0; i < tables[0].size(); ++i) {
      std::vector<FieldElement> vals;
      for (const auto& t : tables) vals.push_back(t[i]);
      sum += comp.evaluate_values(vals);
    }
    EXPECT_TRUE(sum.is_zero()) << "mu=" << mu;
    // pointwise zero as well (the composition vanishes on the hypercube)
    std::vector<FieldElement> vals0;
    for (const auto& t : tables) vals0.push_back(t[0]);
    EXPECT_TRUE(comp.evaluate_values(vals0).is_zero());
  }
}
