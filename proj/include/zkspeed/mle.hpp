#pragma once

// Multilinear-extension tables and the multifunction-tree computations:
// build-eq (forward tree), evaluation (inverse tree), variable-fixing update,
// product layers, and DFS streaming traversal with a bounded working set.
//
// Index convention: variable x_1 sits at bit 0 (LSB), so entry i encodes the
// hypercube point with i = sum_j x_j * 2^(j-1).  The adjacent-pair update
// rule t'[i] = (t[2i+1] - t[2i]) * r + t[2i] therefore fixes x_1.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zkspeed/fp.hpp"

namespace zkspeed::mle {

using fp::FieldConfig;
using fp::FieldElement;

struct MleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MleTable {
  std::uint32_t num_vars = 0;
  std::vector<FieldElement> entries;  // size 2^num_vars

  MleTable() = default;
  MleTable(std::uint32_t mu, std::vector<FieldElement> e)
      : num_vars(mu), entries(std::move(e)) {
    if (entries.size() != (std::size_t{1} << mu))
      throw MleError("table length must be 2^num_vars");
  }

  static MleTable zeros(const FieldConfig& cfg, std::uint32_t mu) {
    return MleTable(mu, std::vector<FieldElement>(std::size_t{1} << mu,
                                                  FieldElement::zero(cfg)));
  }

  std::size_t size() const { return entries.size(); }
  const FieldElement& operator[](std::size_t i) const { return entries[i]; }
  FieldElement& operator[](std::size_t i) { return entries[i]; }
};

// eq(X; r) table together with its challenge point.
struct EqTable {
  MleTable table;
  std::vector<FieldElement> point;
};

// Witness value mix actually realized by a workload (fractions sum to 1).
struct SparsityProfile {
  double frac_zero = 0.45;
  double frac_one = 0.45;
  double frac_dense = 0.10;

  void validate() const {
    double s = frac_zero + frac_one + frac_dense;
    if (frac_zero < 0 || frac_one < 0 || frac_dense < 0 || s < 0.999 || s > 1.001)
      throw MleError("sparsity fractions must be nonnegative and sum to 1");
  }
};

// ---------------------------------------------------------------------------
// fix_variable: one SumCheck-round table update, t has mu >= 1 variables.
// ---------------------------------------------------------------------------

inline MleTable fix_variable(const MleTable& t, const FieldElement& r) {
  if (t.num_vars == 0) throw MleError("fix_variable on 0-variable table");
  std::size_t half = t.size() / 2;
  std::vector<FieldElement> out;
  out.reserve(half);
  for (std::size_t i = 0; i < half; ++i)
    out.push_back((t[2 * i + 1] - t[2 * i]) * r + t[2 * i]);
  return MleTable(t.num_vars - 1, std::move(out));
}

// ---------------------------------------------------------------------------
// build_eq: layered forward-tree construction, exactly 2^(mu+1) - 4 modmuls.
// Layer 1 is [1-r_1, r_1] (no multiplications); each later layer multiplies
// every parent by r_k and by (1-r_k).
// ---------------------------------------------------------------------------

inline EqTable build_eq(const std::vector<FieldElement>& r) {
  if (r.empty()) throw MleError("build_eq needs at least one challenge");
  const FieldConfig& cfg = r[0].config();
  auto one = FieldElement::one(cfg);

  std::vector<FieldElement> layer = {one - r[0], r[0]};
  for (std::size_t k = 1; k < r.size(); ++k) {
    auto cr = r[k];
    auto cc = one - cr;
    std::vector<FieldElement> next(layer.size() * 2, FieldElement::zero(cfg));
    for (std::size_t i = 0; i < layer.size(); ++i) {
      next[i] = layer[i] * cc;
      next[i + layer.size()] = layer[i] * cr;
    }
    layer = std::move(next);
  }
  EqTable out;
  out.table = MleTable((std::uint32_t)r.size(), std::move(layer));
  out.point = r;
  return out;
}

// eq(x; r) at a single (possibly non-binary) point y: prod over coordinates.
inline FieldElement eq_eval(const std::vector<FieldElement>& r,
                            const std::vector<FieldElement>& y) {
  if (r.size() != y.size()) throw MleError("eq_eval dimension mismatch");
  const FieldConfig& cfg = r[0].config();
  auto one = FieldElement::one(cfg);
  auto acc = one;
  for (std::size_t j = 0; j < r.size(); ++j)
    acc *= r[j] * y[j] + (one - r[j]) * (one - y[j]);
  return acc;
}

// ---------------------------------------------------------------------------
// evaluate: fold fix_variable across all variables (inverse tree).
// ---------------------------------------------------------------------------

inline FieldElement evaluate(const MleTable& t, const std::vector<FieldElement>& point) {
  if (point.size() != t.num_vars) throw MleError("evaluate dimension mismatch");
  if (t.num_vars == 0) return t[0];
  MleTable cur = fix_variable(t, point[0]);
  for (std::size_t j = 1; j < point.size(); ++j) cur = fix_variable(cur, point[j]);
  return cur[0];
}

// ---------------------------------------------------------------------------
// product_tree: all internal layers, leaf-adjacent layer first.  n-1 modmuls.
// ---------------------------------------------------------------------------

inline std::vector<std::vector<FieldElement>> product_tree(
    const std::vector<FieldElement>& leaves) {
  std::size_t n = leaves.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw MleError("product_tree needs a power-of-two leaf count >= 2");
  std::vector<std::vector<FieldElement>> layers;
  const std::vector<FieldElement>* prev = &leaves;
  while (prev->size() > 1) {
    std::vector<FieldElement> next;
    next.reserve(prev->size() / 2);
    for (std::size_t i = 0; i < prev->size(); i += 2)
      next.push_back((*prev)[i] * (*prev)[i + 1]);
    layers.push_back(std::move(next));
    prev = &layers.back();
  }
  return layers;
}

// ---------------------------------------------------------------------------
// stream_dfs: depth-first traversals of the three tree roles.  Each variant
// reports the maximum number of simultaneously live intermediates, which
// stays within p + 2*log2(n) for per-step parallelism p.
// ---------------------------------------------------------------------------

struct StreamStats {
  std::size_t max_live = 0;
  std::size_t steps = 0;
};

namespace detail {

// Eager bottom-up pair folding: push values, combine equal-level neighbours
// immediately (binary-counter schedule). emit sees every produced node.
template <typename Combine, typename Emit>
class DfsReducer {
 public:
  DfsReducer(Combine combine, Emit emit) : combine_(combine), emit_(emit) {}

  void push_leaf(FieldElement v, StreamStats* stats) {
    stack_.emplace_back(0u, std::move(v));
    if (stats) stats->max_live = std::max(stats->max_live, stack_.size());
    while (stack_.size() >= 2 &&
           stack_[stack_.size() - 2].first == stack_.back().first) {
      auto [lvl, rhs] = std::move(stack_.back());
      stack_.pop_back();
      auto lhs = std::move(stack_.back().second);
      stack_.pop_back();
      FieldElement parent = combine_(lvl, lhs, rhs);
      emit_(lvl + 1, parent);
      stack_.emplace_back(lvl + 1, std::move(parent));
      if (stats) stats->max_live = std::max(stats->max_live, stack_.size());
    }
  }

  FieldElement root() const {
    if (stack_.size() != 1) throw MleError("inconsistent stream length");
    return stack_[0].second;
  }

 private:
  std::vector<std::pair<std::uint32_t, FieldElement>> stack_;
  Combine combine_;
  Emit emit_;
};

}  // namespace detail

// Reduce pattern: consumes leaves two per step, returns the root.  The
// combiner sees the tree level (0 = leaf-adjacent), so both the product tree
// and the evaluate tree map onto it.
inline FieldElement stream_dfs_reduce(
    const std::vector<FieldElement>& leaves,
    const std::function<FieldElement(std::uint32_t, const FieldElement&,
                                     const FieldElement&)>& combine,
    std::size_t parallelism = 1, StreamStats* stats = nullptr) {
  std::size_t n = leaves.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw MleError("stream_dfs_reduce needs a power-of-two leaf count");
  if (n == 1) return leaves[0];
  detail::DfsReducer red(combine, [](std::uint32_t, const FieldElement&) {});
  std::size_t i = 0;
  while (i < n) {
    std::size_t step = std::min(parallelism * 2, n - i);
    for (std::size_t k = 0; k < step; ++k) red.push_leaf(leaves[i + k], stats);
    i += step;
    if (stats) ++stats->steps;
  }
  return red.root();
}

// Product pattern: emits every internal node labelled with its layer
// (1 = leaf-adjacent), in DFS completion order.
inline std::vector<std::pair<std::uint32_t, FieldElement>> stream_dfs_product(
    const std::vector<FieldElement>& leaves, std::size_t parallelism = 1,
    StreamStats* stats = nullptr) {
  std::size_t n = leaves.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw MleError("stream_dfs_product needs a power-of-two leaf count >= 2");
  std::vector<std::pair<std::uint32_t, FieldElement>> out;
  detail::DfsReducer red(
      [](std::uint32_t, const FieldElement& a, const FieldElement& b) {
        return a * b;
      },
      [&](std::uint32_t lvl, const FieldElement& v) { out.emplace_back(lvl, v); });
  std::size_t i = 0;
  while (i < n) {
    std::size_t step = std::min(parallelism * 2, n - i);
    for (std::size_t k = 0; k < step; ++k) red.push_leaf(leaves[i + k], stats);
    i += step;
    if (stats) ++stats->steps;
  }
  return out;
}

// Forward pattern: emits the build_eq outputs in index order while keeping
// only the path of partial products live.
inline std::vector<FieldElement> stream_dfs_forward(
    const std::vector<FieldElement>& r, std::size_t parallelism = 1,
    StreamStats* stats = nullptr) {
  if (r.empty()) throw MleError("stream_dfs_forward needs challenges");
  (void)parallelism;
  const FieldConfig& cfg = r[0].config();
  auto one = FieldElement::one(cfg);
  std::size_t mu = r.size();
  std::vector<FieldElement> out(std::size_t{1} << mu, FieldElement::zero(cfg));

  // path[d] holds the partial product after fixing the top d+1 variables
  std::vector<FieldElement> path(mu, FieldElement::zero(cfg));
  std::size_t live = 0;

  // iterative DFS over output indices; the top variable x_mu is the MSB
  for (std::size_t i = 0; i < out.size(); ++i) {
    // depth of the first bit differing from i-1 (reuse shared prefix)
    std::size_t start = 0;
    if (i > 0) {
      std::size_t changed = (std::size_t)(63 - __builtin_clzll(i ^ (i - 1)));
      start = mu - 1 - changed;
    }
    for (std::size_t d = start; d < mu; ++d) {
      std::size_t var = mu - 1 - d;  // variable index, MSB first
      bool bit = (i >> var) & 1;
      FieldElement factor = bit ? r[var] : one - r[var];
      if (d == 0) {
        path[0] = factor;
      } else {
        path[d] = path[d - 1] * factor;
      }
      live = std::max(live, d + 1);
    }
    out[i] = path[mu - 1];
    if (stats) {
      stats->max_live = std::max(stats->max_live, live + 1);
      ++stats->steps;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization: length-prefixed, little-endian canonical-form scalars.
// Layout: [u32 num_vars][u64 entry_count][entries...]
// ---------------------------------------------------------------------------

inline void serialize_table(const MleTable& t, std::vector<std::uint8_t>& out) {
  auto put_u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((std::uint8_t)(v >> (8 * i)));
  };
  auto put_u64 = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back((std::uint8_t)(v >> (8 * i)));
  };
  put_u32(t.num_vars);
  put_u64(t.size());
  if (t.size() == 0) return;
  std::size_t nb = t[0].config().canonical_bytes();
  std::size_t base = out.size();
  out.resize(base + nb * t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i].to_bytes_le(out.data() + base + i * nb);
}

inline MleTable deserialize_table(const FieldConfig& cfg,
                                  const std::uint8_t* data, std::size_t len,
                                  std::size_t* consumed = nullptr) {
  auto need = [&](std::size_t n, std::size_t at) {
    if (at + n > len) throw MleError("truncated table stream");
  };
  need(12, 0);
  std::uint32_t mu = 0;
  for (int i = 0; i < 4; ++i) mu |= (std::uint32_t)data[i] << (8 * i);
  std::uint64_t count = 0;
  for (int i = 0; i < 8; ++i) count |= (std::uint64_t)data[4 + i] << (8 * i);
  if (count != (std::uint64_t{1} << mu)) throw MleError("bad table length");
  std::size_t nb = cfg.canonical_bytes();
  need(count * nb, 12);
  std::vector<FieldElement> entries;
  entries.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i)
    entries.push_back(FieldElement::from_bytes_le(cfg, data + 12 + i * nb));
  if (consumed) *consumed = 12 + count * nb;
  return MleTable(mu, std::move(entries));
}

}  // namespace zkspeed::mle
