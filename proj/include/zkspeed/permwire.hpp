#pragma once

// Wiring-identity data pipeline: numerator/denominator MLE construction
// (Plonk permutation terms), the fraction MLE phi = N/D through Montgomery
// batch inversion, and the product structure (v, pi, p1, p2).
//
// Product layout: pi holds the product-tree layers of phi leaf-adjacent
// first, with the final slot zeroed; v = [phi || pi] (the new variable at the
// top); p1/p2 are the even/odd entries of v.  This satisfies
// pi(x) = p1(x) * p2(x) on the whole hypercube (the zeroed slot closes the
// self-referential last point) and exposes the total product at slot
// 2^mu - 2.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zkspeed/fp.hpp"
#include "zkspeed/mle.hpp"

namespace zkspeed::permwire {

using fp::FieldConfig;
using fp::FieldElement;
using mle::MleTable;

struct WiringError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct WiringInputs {
  std::vector<MleTable> w;      // witness tables w_0..w_2
  std::vector<MleTable> sigma;  // permuted wire indices, global encoding
  std::vector<MleTable> id;     // natural wire indices, global encoding
  FieldElement beta, gamma;

  std::uint32_t num_vars() const { return w.at(0).num_vars; }

  void validate() const {
    if (w.size() != 3 || sigma.size() != 3 || id.size() != 3)
      throw WiringError("expected three witness/sigma/id columns");
    std::uint32_t mu = w[0].num_vars;
    for (const auto* group : {&w, &sigma, &id})
      for (const auto& t : *group)
        if (t.num_vars != mu) throw WiringError("wiring tables disagree on mu");
    // sigma must be a bijection over the 3 * 2^mu wire slots
    std::size_t slots = 3 * w[0].size();
    std::vector<bool> seen(slots, false);
    for (const auto& t : sigma) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        auto v = t[i].canonical();
        std::uint64_t x = v[0];
        for (std::size_t l = 1; l < fp::kMaxLimbs; ++l)
          if (v[l]) throw WiringError("sigma entry exceeds slot range");
        if (x >= slots || seen[x])
          throw WiringError("sigma is not a permutation of the wire slots");
        seen[x] = true;
      }
    }
  }
};

struct NdOutput {
  std::vector<MleTable> n_parts;  // N_0..N_2
  std::vector<MleTable> d_parts;  // D_0..D_2
  MleTable n, d;
};

// N_j[i] = w_j[i] + beta * id_j[i] + gamma
// D_j[i] = w_j[i] + beta * sigma_j[i] + gamma
inline NdOutput construct_nd(const WiringInputs& in) {
  in.validate();
  const FieldConfig& cfg = in.beta.config();
  std::size_t len = in.w[0].size();
  std::uint32_t mu = in.num_vars();

  NdOutput out;
  for (int j = 0; j < 3; ++j) {
    std::vector<FieldElement> nj, dj;
    nj.reserve(len);
    dj.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      nj.push_back(in.w[j][i] + in.beta * in.id[j][i] + in.gamma);
      dj.push_back(in.w[j][i] + in.beta * in.sigma[j][i] + in.gamma);
    }
    out.n_parts.emplace_back(mu, std::move(nj));
    out.d_parts.emplace_back(mu, std::move(dj));
  }
  std::vector<FieldElement> n, d;
  n.reserve(len);
  d.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    n.push_back(out.n_parts[0][i] * out.n_parts[1][i] * out.n_parts[2][i]);
    d.push_back(out.d_parts[0][i] * out.d_parts[1][i] * out.d_parts[2][i]);
  }
  out.n = MleTable(mu, std::move(n));
  out.d = MleTable(mu, std::move(d));
  (void)cfg;
  return out;
}

// phi[i] = N[i] / D[i] through batched inversion; batching is value-invariant
// and the output stays in index order.
inline MleTable frac_mle(const MleTable& n, const MleTable& d,
                         std::size_t batch_size = 64) {
  if (n.num_vars != d.num_vars) throw WiringError("N/D size mismatch");
  if (batch_size < 1) throw WiringError("batch size must be >= 1");
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i].is_zero()) throw fp::NonInvertibleError(i);

  std::vector<FieldElement> phi;
  phi.reserve(d.size());
  for (std::size_t base = 0; base < d.size(); base += batch_size) {
    std::size_t count = std::min(batch_size, d.size() - base);
    std::vector<FieldElement> batch(d.entries.begin() + base,
                                    d.entries.begin() + base + count);
    auto inv = fp::batch_inverse(batch);
    for (std::size_t i = 0; i < count; ++i) phi.push_back(n[base + i] * inv[i]);
  }
  return MleTable(n.num_vars, std::move(phi));
}

struct ProductStructure {
  MleTable v;   // mu+1 variables, [phi || pi]
  MleTable pi;  // mu variables: tree layers, final slot zero
  MleTable p1;  // even entries of v
  MleTable p2;  // odd entries of v
  std::size_t root_slot = 0;  // index of the total product inside pi
};

inline ProductStructure build_product(const MleTable& phi) {
  if (phi.num_vars < 1) throw WiringError("phi needs at least one variable");
  const FieldConfig& cfg = phi[0].config();
  std::uint32_t mu = phi.num_vars;

  auto layers = mle::product_tree(phi.entries);
  std::vector<FieldElement> pi;
  pi.reserve(phi.size());
  for (const auto& layer : layers)
    pi.insert(pi.end(), layer.begin(), layer.end());
  pi.push_back(FieldElement::zero(cfg));  // self-referential final slot

  ProductStructure out;
  out.root_slot = phi.size() - 2;
  out.pi = MleTable(mu, std::move(pi));

  std::vector<FieldElement> v;
  v.reserve(2 * phi.size());
  v.insert(v.end(), phi.entries.begin(), phi.entries.end());
  v.insert(v.end(), out.pi.entries.begin(), out.pi.entries.end());
  out.v = MleTable(mu + 1, std::move(v));

  std::vector<FieldElement> p1, p2;
  p1.reserve(phi.size());
  p2.reserve(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    p1.push_back(out.v[2 * i]);
    p2.push_back(out.v[2 * i + 1]);
  }
  out.p1 = MleTable(mu, std::move(p1));
  out.p2 = MleTable(mu, std::move(p2));
  return out;
}

}  // namespace zkspeed::permwire
