#pragma once

// Mock-circuit workload generator.  Gates are add/mul/constant; the constant
// gates' values are chosen greedily against the running witness tally so the
// realized zero/one/dense mix tracks the requested profile.  Wiring chains a
// fraction of gate outputs into later gates' first input; sigma encodes
// exactly those copy cycles over the 3*2^mu wire slots.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "zkspeed/mle.hpp"
#include "zkspeed/permwire.hpp"

namespace zkspeed::circuit {

using fp::FieldConfig;
using fp::FieldElement;
using mle::MleTable;
using mle::SparsityProfile;

struct CircuitError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Workload {
  std::uint32_t mu = 4;
  SparsityProfile sparsity;
  std::uint64_t seed = 1;
  double wiring_fraction = 0.3;
};

struct MockCircuit {
  std::uint32_t mu = 0;
  MleTable q_l, q_r, q_m, q_o, q_c;
  std::vector<MleTable> w;      // w_0..w_2 (inputs, output)
  std::vector<MleTable> sigma;  // global wire indices
  std::vector<MleTable> id;
  SparsityProfile realized;

  std::size_t gates() const { return std::size_t{1} << mu; }

  // Eq-1 residual: qL*w1 + qR*w2 + qM*w1*w2 - qO*w3 + qc, gate-wise.
  FieldElement gate_residual(std::size_t i) const {
    return q_l[i] * w[0][i] + q_r[i] * w[1][i] + q_m[i] * w[0][i] * w[1][i] -
           q_o[i] * w[2][i] + q_c[i];
  }

  bool gate_identity_holds() const {
    for (std::size_t i = 0; i < gates(); ++i)
      if (!gate_residual(i).is_zero()) return false;
    return true;
  }

  permwire::WiringInputs wiring_inputs(const FieldElement& beta,
                                       const FieldElement& gamma) const {
    permwire::WiringInputs in;
    in.w = w;
    in.sigma = sigma;
    in.id = id;
    in.beta = beta;
    in.gamma = gamma;
    return in;
  }
};

namespace detail {

class ValueSampler {
 public:
  ValueSampler(const FieldConfig& cfg, const SparsityProfile& target)
      : cfg_(&cfg), target_(target) {}

  enum class Kind { zero, one, dense };

  FieldElement sample(std::mt19937_64& rng) {
    double roll = (double)(rng() >> 11) * 0x1.0p-53;
    Kind k = roll < target_.frac_zero ? Kind::zero
             : roll < target_.frac_zero + target_.frac_one ? Kind::one
                                                           : Kind::dense;
    return make(k, rng);
  }

  // constant-gate value: the class with the largest running deficit
  FieldElement balanced(std::mt19937_64& rng) {
    double total = (double)(zero_ + one_ + dense_) + 1.0;
    double dz = target_.frac_zero * total - (double)zero_;
    double d1 = target_.frac_one * total - (double)one_;
    double dd = target_.frac_dense * total - (double)dense_;
    Kind k = (dz >= d1 && dz >= dd) ? Kind::zero : (d1 >= dd ? Kind::one : Kind::dense);
    return make(k, rng);
  }

  // every witness entry passes through here exactly once
  void record(const FieldElement& v) {
    if (v.is_zero()) ++zero_;
    else if (v == FieldElement::one(*cfg_)) ++one_;
    else ++dense_;
  }

  SparsityProfile realized() const {
    double total = (double)(zero_ + one_ + dense_);
    return {(double)zero_ / total, (double)one_ / total, (double)dense_ / total};
  }

 private:
  FieldElement make(Kind k, std::mt19937_64& rng) {
    switch (k) {
      case Kind::zero: return FieldElement::zero(*cfg_);
      case Kind::one: return FieldElement::one(*cfg_);
      default: {
        auto v = FieldElement::random(*cfg_, rng);
        while (v.is_zero() || v == FieldElement::one(*cfg_))
          v = FieldElement::random(*cfg_, rng);
        return v;
      }
    }
  }

  const FieldConfig* cfg_;
  SparsityProfile target_;
  std::uint64_t zero_ = 0, one_ = 0, dense_ = 0;
};

}  // namespace detail

inline MockCircuit gen_mock_circuit(const FieldConfig& cfg, const Workload& wl) {
  if (wl.mu < 2) throw CircuitError("mu must be >= 2");
  if (wl.wiring_fraction < 0 || wl.wiring_fraction > 1)
    throw CircuitError("wiring fraction out of range");
  wl.sparsity.validate();

  const std::size_t n = std::size_t{1} << wl.mu;
  std::mt19937_64 rng(wl.seed);
  detail::ValueSampler sampler(cfg, wl.sparsity);

  auto zero = FieldElement::zero(cfg);
  auto one = FieldElement::one(cfg);
  std::vector<FieldElement> ql(n, zero), qr(n, zero), qm(n, zero), qo(n, zero),
      qc(n, zero);
  std::vector<std::vector<FieldElement>> w(3,
                                           std::vector<FieldElement>(n, zero));
  // copy constraints: next[s] = successor of slot s in its copy cycle
  std::vector<std::size_t> next(3 * n);
  for (std::size_t s = 0; s < 3 * n; ++s) next[s] = s;

  auto slot = [n](int col, std::size_t i) { return (std::size_t)col * n + i; };

  for (std::size_t i = 0; i < n; ++i) {
    // first input: either wired from an earlier gate's output or fresh
    double roll = (double)(rng() >> 11) * 0x1.0p-53;
    if (i > 0 && roll < wl.wiring_fraction) {
      std::size_t j = rng() % i;
      w[0][i] = w[2][j];
      // splice slot (0,i) into the cycle of (2,j)
      std::size_t a = slot(2, j), b = slot(0, i);
      std::size_t a_next = next[a];
      next[a] = b;
      next[b] = a_next;
    } else {
      w[0][i] = sampler.sample(rng);
    }
    sampler.record(w[0][i]);

    w[1][i] = sampler.sample(rng);
    sampler.record(w[1][i]);

    std::uint64_t type_roll = rng() % 10;
    if (type_roll < 2) {  // add
      ql[i] = one;
      qr[i] = one;
      qo[i] = one;
      w[2][i] = w[0][i] + w[1][i];
    } else if (type_roll < 4) {  // mul
      qm[i] = one;
      qo[i] = one;
      w[2][i] = w[0][i] * w[1][i];
    } else {  // constant
      qo[i] = one;
      qc[i] = sampler.balanced(rng);
      w[2][i] = qc[i];
    }
    sampler.record(w[2][i]);
  }

  MockCircuit c;
  c.mu = wl.mu;
  c.q_l = MleTable(wl.mu, std::move(ql));
  c.q_r = MleTable(wl.mu, std::move(qr));
  c.q_m = MleTable(wl.mu, std::move(qm));
  c.q_o = MleTable(wl.mu, std::move(qo));
  c.q_c = MleTable(wl.mu, std::move(qc));
  for (int j = 0; j < 3; ++j) {
    c.w.emplace_back(wl.mu, std::move(w[j]));
    std::vector<FieldElement> s, d;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back(FieldElement::from_u64(cfg, next[slot(j, i)]));
      d.push_back(FieldElement::from_u64(cfg, slot(j, i)));
    }
    c.sigma.emplace_back(wl.mu, std::move(s));
    c.id.emplace_back(wl.mu, std::move(d));
  }
  c.realized = sampler.realized();
  return c;
}

}  // namespace zkspeed::circuit
