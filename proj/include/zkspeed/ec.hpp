#pragma once

// Short-Weierstrass elliptic-curve arithmetic in homogeneous projective
// coordinates.  A single complete addition formula (Renes-Costello-Batina)
// serves add, double and identity cases, mirroring one fully-pipelined PADD
// unit with no branch hazards.

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "zkspeed/fp.hpp"

namespace zkspeed::ec {

using fp::FieldConfig;
using fp::FieldElement;

struct CurveError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class CurveConfig;

struct AffinePoint {
  FieldElement x, y;
  bool infinity = false;
};

class CurvePoint {
 public:
  FieldElement X, Y, Z;
  const CurveConfig* curve = nullptr;

  CurvePoint() = default;
  CurvePoint(FieldElement x, FieldElement y, FieldElement z, const CurveConfig* c)
      : X(std::move(x)), Y(std::move(y)), Z(std::move(z)), curve(c) {}

  bool is_identity() const { return Z.is_zero(); }

  friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
    // projective equality: cross-multiplied coordinates
    if (a.is_identity() || b.is_identity())
      return a.is_identity() == b.is_identity();
    fp::ModmulPause pause;
    return a.X * b.Z == b.X * a.Z && a.Y * b.Z == b.Y * a.Z;
  }
  friend bool operator!=(const CurvePoint& a, const CurvePoint& b) {
    return !(a == b);
  }
};

// Elements inside the config reference its own base_field, so the config is
// heap-owned with a stable address and never copied.
class CurveConfig {
 public:
  FieldConfig base_field;
  FieldConfig scalar_field;
  FieldElement a, b, b3;  // curve coefficients, b3 = 3b
  AffinePoint generator;
  std::string name;

  CurveConfig() = default;
  CurveConfig(const CurveConfig&) = delete;
  CurveConfig& operator=(const CurveConfig&) = delete;
};

// The config carries FieldElements that point at its own base_field, so it is
// built in place and must stay at a stable address afterwards.
inline void init_curve(CurveConfig& c, std::uint64_t a_u64, std::uint64_t b_u64,
                       const std::string& gx_hex, const std::string& gy_hex,
                       const std::string& curve_name) {
  c.name = curve_name;
  c.a = FieldElement::from_u64(c.base_field, a_u64);
  c.b = FieldElement::from_u64(c.base_field, b_u64);
  c.b3 = c.b + c.b + c.b;
  auto parse = [&](const std::string& h) {
    FieldConfig tmp;  // reuse hex parser via config-free path
    fp::Limbs raw{};
    std::size_t limb = 0, shift = 0;
    std::string s = h;
    if (s.rfind("0x", 0) == 0) s = s.substr(2);
    for (std::size_t i = s.size(); i-- > 0;) {
      char ch = s[i];
      std::uint64_t d = ch <= '9' ? std::uint64_t(ch - '0')
                                  : std::uint64_t((ch | 0x20) - 'a' + 10);
      raw[limb] |= d << shift;
      shift += 4;
      if (shift == 64) { shift = 0; ++limb; }
    }
    return FieldElement::from_canonical(c.base_field, raw);
  };
  c.generator.x = parse(gx_hex);
  c.generator.y = parse(gy_hex);
  c.generator.infinity = false;
}

inline CurvePoint identity_point(const CurveConfig& c) {
  return CurvePoint(FieldElement::zero(c.base_field),
                    FieldElement::one(c.base_field),
                    FieldElement::zero(c.base_field), &c);
}

inline CurvePoint from_affine(const CurveConfig& c, const AffinePoint& p) {
  if (p.infinity) return identity_point(c);
  return CurvePoint(p.x, p.y, FieldElement::one(c.base_field), &c);
}

inline CurvePoint generator_point(const CurveConfig& c) {
  return from_affine(c, c.generator);
}

// y^2 z = x^3 + a x z^2 + b z^3 (holds trivially for the identity encoding)
inline bool is_on_curve(const CurvePoint& p) {
  if (!p.curve) return false;
  fp::ModmulPause pause;
  const auto& c = *p.curve;
  auto lhs = p.Y * p.Y * p.Z;
  auto z2 = p.Z * p.Z;
  auto rhs = p.X * p.X * p.X + c.a * p.X * z2 + c.b * z2 * p.Z;
  return lhs == rhs;
}

// The single addition law is exceptional exactly on pairs whose difference is
// a 2-torsion point; it then returns (0:0:0).  Odd-order groups (BLS12-381
// G1) never hit this. The toy test curve has even order, so a chord-tangent
// fallback keeps padd total there as well.
inline CurvePoint padd_exceptional(const CurvePoint& p, const CurvePoint& q) {
  if (p.is_identity()) return q;
  if (q.is_identity()) return p;
  const CurveConfig& c = *p.curve;
  auto zinv = fp::batch_inverse({p.Z, q.Z});
  auto x1 = p.X * zinv[0], y1 = p.Y * zinv[0];
  auto x2 = q.X * zinv[1], y2 = q.Y * zinv[1];
  if (x1 == x2) {
    if (y1 == y2 && !y1.is_zero()) {
      auto num = x1 * x1;
      num = num + num + num + c.a;
      auto s = num * fp::mod_inv_beea(y1 + y1);
      auto x3 = s * s - x1 - x2;
      return CurvePoint(x3, s * (x1 - x3) - y1,
                        FieldElement::one(c.base_field), p.curve);
    }
    return identity_point(c);
  }
  auto s = (y2 - y1) * fp::mod_inv_beea(x2 - x1);
  auto x3 = s * s - x1 - x2;
  return CurvePoint(x3, s * (x1 - x3) - y1, FieldElement::one(c.base_field),
                    p.curve);
}

// Complete projective addition (RCB15 algorithm 1, general a).
// 12 generic + 3 mul-by-a + 2 mul-by-3b modmuls, identical for every case.
inline CurvePoint padd(const CurvePoint& p, const CurvePoint& q) {
  if (!p.curve || !q.curve) throw CurveError("point without curve config");
  if (p.curve != q.curve && p.curve->name != q.curve->name)
    throw CurveError("mixed-curve operands");
  const CurveConfig& c = *p.curve;

  const FieldElement &X1 = p.X, &Y1 = p.Y, &Z1 = p.Z;
  const FieldElement &X2 = q.X, &Y2 = q.Y, &Z2 = q.Z;

  FieldElement t0 = X1 * X2;
  FieldElement t1 = Y1 * Y2;
  FieldElement t2 = Z1 * Z2;
  FieldElement t3 = (X1 + Y1) * (X2 + Y2) - (t0 + t1);  // X1Y2 + X2Y1
  FieldElement t4 = (X1 + Z1) * (X2 + Z2) - (t0 + t2);  // X1Z2 + X2Z1
  FieldElement t5 = (Y1 + Z1) * (Y2 + Z2) - (t1 + t2);  // Y1Z2 + Y2Z1

  FieldElement Z3 = c.a * t4;
  FieldElement X3 = c.b3 * t2;
  Z3 = X3 + Z3;
  X3 = t1 - Z3;
  Z3 = t1 + Z3;
  FieldElement Y3 = X3 * Z3;
  t1 = t0 + t0 + t0;
  t2 = c.a * t2;
  t4 = c.b3 * t4;
  t1 = t1 + t2;
  t2 = c.a * (t0 - t2);
  t4 = t4 + t2;
  t0 = t1 * t4;
  Y3 = Y3 + t0;
  t0 = t5 * t4;
  X3 = X3 * t3 - t0;
  t0 = t3 * t1;
  Z3 = t5 * Z3 + t0;

  if (X3.is_zero() && Y3.is_zero() && Z3.is_zero())
    return padd_exceptional(p, q);
  return CurvePoint(X3, Y3, Z3, p.curve);
}

// Double-and-add; serves as the MSM oracle and for tiny instances.  Scalars
// are plain unsigned integers (limb vector), independent of any field config.
inline CurvePoint scalar_mul_limbs(const fp::Limbs& k, std::size_t nlimbs,
                                   const CurvePoint& p) {
  CurvePoint acc = identity_point(*p.curve);
  std::uint32_t bits = fp::bit_length(k, nlimbs);
  for (std::uint32_t i = bits; i-- > 0;) {
    acc = padd(acc, acc);
    if ((k[i / 64] >> (i % 64)) & 1) acc = padd(acc, p);
  }
  return acc;
}

inline CurvePoint scalar_mul(const FieldElement& k, const CurvePoint& p) {
  return scalar_mul_limbs(k.canonical(), k.config().nlimbs, p);
}

inline CurvePoint scalar_mul_u64(std::uint64_t k, const CurvePoint& p) {
  fp::Limbs raw{};
  raw[0] = k;
  return scalar_mul_limbs(raw, 1, p);
}

inline AffinePoint to_affine(const CurvePoint& p) {
  if (p.is_identity()) {
    AffinePoint a{FieldElement::zero(p.curve->base_field),
                  FieldElement::one(p.curve->base_field), true};
    return a;
  }
  auto zinv = fp::mod_inv_beea(p.Z);
  return AffinePoint{p.X * zinv, p.Y * zinv, false};
}

// Batch projective->affine normalization with one inversion.
inline std::vector<CurvePoint> batch_normalize(const std::vector<CurvePoint>& pts) {
  std::vector<CurvePoint> out;
  out.reserve(pts.size());
  if (pts.empty()) return out;
  const CurveConfig& c = *pts[0].curve;
  std::vector<FieldElement> zs;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].is_identity()) {
      zs.push_back(pts[i].Z);
      idx.push_back(i);
    }
  }
  auto zinv = fp::batch_inverse(zs);
  out.assign(pts.begin(), pts.end());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    auto& p = out[idx[j]];
    p = CurvePoint(p.X * zinv[j], p.Y * zinv[j], FieldElement::one(c.base_field),
                   p.curve);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

// Toy curve y^2 = x^3 + 7 over F_17 (group order 18, found by enumeration in
// tests).  scalar_field is the F_17 test field; toy commitments treat scalars
// as plain integers below q.
inline std::shared_ptr<CurveConfig> toy_curve_17() {
  auto c = std::make_shared<CurveConfig>();
  c->base_field = FieldConfig::from_u64(17, "f17-base");
  c->scalar_field = FieldConfig::from_u64(17, "f17-scalar");
  init_curve(*c, 0, 7, "1", "5", "toy17");  // (1, 5): 5^2 = 8 = 1 + 7
  return c;
}

inline std::shared_ptr<CurveConfig> bls12_381_g1() {
  auto c = std::make_shared<CurveConfig>();
  c->base_field = FieldConfig::bls12_381_base();
  c->scalar_field = FieldConfig::bls12_381_scalar();
  init_curve(
      *c, 0, 4,
      "17f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac58"
      "6c55e83ff97a1aeffb3af00adb22c6bb",
      "08b3f481e3aaa0f1a09e30ed741d8ae4fcf5e095d5d00af600db18cb2c04b3ed"
      "d03cc744a2888ae40caa232946c5e7e1",
      "bls12-381-g1");
  return c;
}

}  // namespace zkspeed::ec
