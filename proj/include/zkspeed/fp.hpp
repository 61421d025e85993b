#pragma once

// Prime-field arithmetic on little-endian 64-bit limbs with Montgomery-form
// multiplication, a constant-time binary extended Euclidean inversion
// (fixed 2W-1 iterations) and Montgomery batch inversion.
//
// FieldConfig is runtime data: the same code paths run on tiny test fields
// (q = 17) and on the 255-bit BLS12-381 scalar field.

#include <array>
#include <cstdint>
#include <cstring>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace zkspeed::fp {

inline constexpr std::size_t kMaxLimbs = 6;  // up to 384-bit moduli

using Limbs = std::array<std::uint64_t, kMaxLimbs>;
using u128 = unsigned __int128;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonInvertibleError : std::domain_error {
  std::size_t index;  // offending position for batch operations, 0 otherwise
  explicit NonInvertibleError(std::size_t idx = 0)
      : std::domain_error("element is not invertible (zero)"), index(idx) {}
};

// ---------------------------------------------------------------------------
// Limb-vector helpers (length given by the active config)
// ---------------------------------------------------------------------------

inline int cmp_limbs(const Limbs& a, const Limbs& b, std::size_t n) {
  for (std::size_t i = n; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

inline bool is_zero_limbs(const Limbs& a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != 0) return false;
  return true;
}

// a += b, returns carry
inline std::uint64_t add_limbs(Limbs& a, const Limbs& b, std::size_t n) {
  u128 carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    carry += (u128)a[i] + b[i];
    a[i] = (std::uint64_t)carry;
    carry >>= 64;
  }
  return (std::uint64_t)carry;
}

// a -= b, returns borrow
inline std::uint64_t sub_limbs(Limbs& a, const Limbs& b, std::size_t n) {
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t bi = b[i];
    std::uint64_t t = a[i] - bi;
    std::uint64_t b2 = (a[i] < bi) ? 1 : 0;
    std::uint64_t t2 = t - borrow;
    b2 += (t < borrow) ? 1 : 0;
    a[i] = t2;
    borrow = b2;
  }
  return borrow;
}

inline void shr1_limbs(Limbs& a, std::size_t n) {
  for (std::size_t i = 0; i + 1 < n; ++i) a[i] = (a[i] >> 1) | (a[i + 1] << 63);
  a[n - 1] >>= 1;
}

// Branchless conditional ops keyed on mask in {0, ~0}.
inline void cswap_limbs(std::uint64_t mask, Limbs& a, Limbs& b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t d = mask & (a[i] ^ b[i]);
    a[i] ^= d;
    b[i] ^= d;
  }
}

inline std::uint32_t bit_length(const Limbs& a, std::size_t n) {
  for (std::size_t i = n; i-- > 0;) {
    if (a[i] != 0) {
      std::uint32_t bits = 64;
      std::uint64_t v = a[i];
      while (!(v >> 63)) {
        v <<= 1;
        --bits;
      }
      return (std::uint32_t)(64 * i) + bits;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Modmul instrumentation: an opt-in, per-thread counter scope.  mod_mul
// increments the active counter (if any); hot paths pay one TLS load.
// ---------------------------------------------------------------------------

struct ModmulCounter {
  std::uint64_t count = 0;
};

namespace detail {
inline thread_local ModmulCounter* tl_modmul = nullptr;
}

class ModmulScope {
 public:
  explicit ModmulScope(ModmulCounter& c) : prev_(detail::tl_modmul) {
    detail::tl_modmul = &c;
  }
  ~ModmulScope() { detail::tl_modmul = prev_; }
  ModmulScope(const ModmulScope&) = delete;
  ModmulScope& operator=(const ModmulScope&) = delete;

 private:
  ModmulCounter* prev_;
};

// Temporarily suspends counting (e.g. one-time precomputation inside a
// counted region).
class ModmulPause {
 public:
  ModmulPause() : prev_(detail::tl_modmul) { detail::tl_modmul = nullptr; }
  ~ModmulPause() { detail::tl_modmul = prev_; }
  ModmulPause(const ModmulPause&) = delete;
  ModmulPause& operator=(const ModmulPause&) = delete;

 private:
  ModmulCounter* prev_;
};

// ---------------------------------------------------------------------------
// FieldConfig
// ---------------------------------------------------------------------------

class FieldConfig {
 public:
  Limbs modulus{};
  std::size_t nlimbs = 0;
  std::uint32_t bit_width = 0;  // W with 2^(W-1) <= q < 2^W
  std::string name;

  // Montgomery constants for R = 2^(64*nlimbs)
  Limbs r2{};             // R^2 mod q
  Limbs one_mont{};       // R mod q
  std::uint64_t qinv = 0; // -q^{-1} mod 2^64
  // Maps the raw BEEA output v (with 2^(2W-1) = v * m mod q, m the Montgomery
  // representative) straight back to Montgomery form: 2^(192*nlimbs-(2W-1)).
  Limbs beea_fixup{};

  FieldConfig() = default;

  static FieldConfig from_hex(const std::string& modulus_hex,
                              const std::string& field_name = "") {
    FieldConfig f;
    f.name = field_name;
    f.modulus = parse_hex(modulus_hex);
    f.init();
    return f;
  }

  static FieldConfig from_u64(std::uint64_t q, const std::string& field_name = "") {
    FieldConfig f;
    f.name = field_name;
    f.modulus[0] = q;
    f.init();
    return f;
  }

  // BLS12-381 scalar field r (public curve standard).
  static FieldConfig bls12_381_scalar() {
    return from_hex(
        "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001",
        "bls12-381-scalar");
  }

  // BLS12-381 base field p (public curve standard).
  static FieldConfig bls12_381_base() {
    return from_hex(
        "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f624"
        "1eabfffeb153ffffb9feffffffffaaab",
        "bls12-381-base");
  }

  bool same_modulus(const FieldConfig& o) const {
    return nlimbs == o.nlimbs && cmp_limbs(modulus, o.modulus, nlimbs) == 0;
  }

  std::size_t canonical_bytes() const { return (bit_width + 7) / 8; }

 private:
  static Limbs parse_hex(std::string s) {
    if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) s = s.substr(2);
    if (s.empty() || s.size() > kMaxLimbs * 16)
      throw ConfigError("bad modulus hex string");
    Limbs out{};
    std::size_t limb = 0, shift = 0;
    for (std::size_t i = s.size(); i-- > 0;) {
      char c = s[i];
      std::uint64_t d;
      if (c >= '0' && c <= '9') d = (std::uint64_t)(c - '0');
      else if (c >= 'a' && c <= 'f') d = (std::uint64_t)(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') d = (std::uint64_t)(c - 'A' + 10);
      else throw ConfigError("bad hex digit in modulus");
      out[limb] |= d << shift;
      shift += 4;
      if (shift == 64) {
        shift = 0;
        ++limb;
      }
    }
    return out;
  }

  void init() {
    bit_width = bit_length(modulus, kMaxLimbs);
    if (bit_width < 2) throw ConfigError("modulus too small");
    if (!(modulus[0] & 1)) throw ConfigError("modulus must be odd");
    nlimbs = (bit_width + 63) / 64;

    // -q^{-1} mod 2^64 via Newton iteration
    std::uint64_t q0 = modulus[0];
    std::uint64_t inv = q0;
    for (int i = 0; i < 5; ++i) inv *= 2 - q0 * inv;
    qinv = ~inv + 1;

    one_mont = pow2_mod(64 * (std::uint32_t)nlimbs);
    r2 = pow2_mod(128 * (std::uint32_t)nlimbs);
    beea_fixup = pow2_mod(192 * (std::uint32_t)nlimbs - (2 * bit_width - 1));

    if (!is_probable_prime())
      throw ConfigError("modulus failed primality check: " + name);
  }

  // 2^k mod q by repeated doubling; used only during setup.
  Limbs pow2_mod(std::uint32_t k) const {
    Limbs t{};
    t[0] = 1;
    // reduce the initial 1 (q > 1 always)
    for (std::uint32_t i = 0; i < k; ++i) {
      std::uint64_t carry = add_limbs(t, t, nlimbs);
      if (carry || cmp_limbs(t, modulus, nlimbs) >= 0) sub_limbs(t, modulus, nlimbs);
    }
    return t;
  }

  bool is_probable_prime() const;
};

// ---------------------------------------------------------------------------
// Core Montgomery ops (free functions over limbs + config)
// ---------------------------------------------------------------------------

// CIOS Montgomery multiplication: out = a * b * R^{-1} mod q.
inline void mont_mul_limbs(Limbs& out, const Limbs& a, const Limbs& b,
                           const FieldConfig& f) {
  const std::size_t n = f.nlimbs;
  std::uint64_t t[kMaxLimbs + 2] = {0};
  for (std::size_t i = 0; i < n; ++i) {
    u128 carry = 0;
    for (std::size_t j = 0; j < n; ++j) {
      carry += (u128)a[i] * b[j] + t[j];
      t[j] = (std::uint64_t)carry;
      carry >>= 64;
    }
    carry += t[n];
    t[n] = (std::uint64_t)carry;
    t[n + 1] = (std::uint64_t)(carry >> 64);

    std::uint64_t m = t[0] * f.qinv;
    carry = (u128)m * f.modulus[0] + t[0];
    carry >>= 64;
    for (std::size_t j = 1; j < n; ++j) {
      carry += (u128)m * f.modulus[j] + t[j];
      t[j - 1] = (std::uint64_t)carry;
      carry >>= 64;
    }
    carry += t[n];
    t[n - 1] = (std::uint64_t)carry;
    t[n] = t[n + 1] + (std::uint64_t)(carry >> 64);
    t[n + 1] = 0;
  }
  Limbs r{};
  for (std::size_t j = 0; j < n; ++j) r[j] = t[j];
  if (t[n] != 0 || cmp_limbs(r, f.modulus, n) >= 0) sub_limbs(r, f.modulus, n);
  out = r;
}

inline void mod_add_limbs(Limbs& a, const Limbs& b, const FieldConfig& f) {
  std::uint64_t carry = add_limbs(a, b, f.nlimbs);
  if (carry || cmp_limbs(a, f.modulus, f.nlimbs) >= 0)
    sub_limbs(a, f.modulus, f.nlimbs);
}

inline void mod_sub_limbs(Limbs& a, const Limbs& b, const FieldConfig& f) {
  if (cmp_limbs(a, b, f.nlimbs) < 0) add_limbs(a, f.modulus, f.nlimbs);
  sub_limbs(a, b, f.nlimbs);
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

class FieldElement {
 public:
  FieldElement() : cfg_(nullptr), v_{} {}

  static FieldElement zero(const FieldConfig& cfg) { return FieldElement(&cfg); }

  static FieldElement one(const FieldConfig& cfg) {
    FieldElement e(&cfg);
    e.v_ = cfg.one_mont;
    return e;
  }

  static FieldElement from_u64(const FieldConfig& cfg, std::uint64_t x) {
    Limbs raw{};
    raw[0] = x;
    return from_canonical(cfg, raw);
  }

  // Canonical (non-Montgomery) limbs, reduced mod q on entry.
  static FieldElement from_canonical(const FieldConfig& cfg, Limbs raw) {
    while (cmp_limbs(raw, cfg.modulus, cfg.nlimbs) >= 0)
      sub_limbs(raw, cfg.modulus, cfg.nlimbs);
    FieldElement e(&cfg);
    mont_mul_limbs(e.v_, raw, cfg.r2, cfg);
    return e;
  }

  static FieldElement random(const FieldConfig& cfg, std::mt19937_64& rng) {
    Limbs raw{};
    for (;;) {
      for (std::size_t i = 0; i < cfg.nlimbs; ++i) raw[i] = rng();
      std::uint32_t top = cfg.bit_width % 64;
      if (top) raw[cfg.nlimbs - 1] &= (~0ULL) >> (64 - top);
      if (cmp_limbs(raw, cfg.modulus, cfg.nlimbs) < 0) break;
    }
    FieldElement e(&cfg);
    mont_mul_limbs(e.v_, raw, cfg.r2, cfg);
    return e;
  }

  const FieldConfig& config() const {
    if (!cfg_) throw ConfigError("uninitialized field element");
    return *cfg_;
  }

  bool is_zero() const { return !cfg_ || is_zero_limbs(v_, cfg_->nlimbs); }

  Limbs canonical() const {
    Limbs one{};
    one[0] = 1;
    Limbs out;
    mont_mul_limbs(out, v_, one, *cfg_);
    return out;
  }

  std::uint64_t canonical_u64() const { return canonical()[0]; }

  void to_bytes_le(std::uint8_t* dst) const {
    Limbs c = canonical();
    std::size_t nb = cfg_->canonical_bytes();
    for (std::size_t i = 0; i < nb; ++i)
      dst[i] = (std::uint8_t)(c[i / 8] >> (8 * (i % 8)));
  }

  static FieldElement from_bytes_le(const FieldConfig& cfg, const std::uint8_t* src) {
    Limbs raw{};
    std::size_t nb = cfg.canonical_bytes();
    for (std::size_t i = 0; i < nb; ++i)
      raw[i / 8] |= (std::uint64_t)src[i] << (8 * (i % 8));
    return from_canonical(cfg, raw);
  }

  friend FieldElement operator+(FieldElement a, const FieldElement& b) {
    a.check_same(b);
    mod_add_limbs(a.v_, b.v_, *a.cfg_);
    return a;
  }

  friend FieldElement operator-(FieldElement a, const FieldElement& b) {
    a.check_same(b);
    mod_sub_limbs(a.v_, b.v_, *a.cfg_);
    return a;
  }

  FieldElement operator-() const {
    FieldElement r = *this;
    if (!is_zero_limbs(r.v_, cfg_->nlimbs)) {
      Limbs m = cfg_->modulus;
      sub_limbs(m, r.v_, cfg_->nlimbs);
      r.v_ = m;
    }
    return r;
  }

  friend FieldElement operator*(FieldElement a, const FieldElement& b) {
    a.check_same(b);
    if (detail::tl_modmul) ++detail::tl_modmul->count;
    mont_mul_limbs(a.v_, a.v_, b.v_, *a.cfg_);
    return a;
  }

  FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
  FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
  FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    if (a.cfg_ == nullptr && b.cfg_ == nullptr) return true;
    if (a.cfg_ == nullptr || b.cfg_ == nullptr) return false;
    a.check_same(b);
    return cmp_limbs(a.v_, b.v_, a.cfg_->nlimbs) == 0;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) {
    return !(a == b);
  }

  FieldElement doubled() const { return *this + *this; }

  // Exponentiation by a u64 (setup/test helper, counts its modmuls).
  FieldElement pow(std::uint64_t e) const {
    FieldElement acc = one(*cfg_);
    FieldElement base = *this;
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  // Montgomery-form raw limbs (serialization of internal state not exposed).
  const Limbs& mont_limbs() const { return v_; }

 private:
  explicit FieldElement(const FieldConfig* cfg) : cfg_(cfg), v_{} {}

  void check_same(const FieldElement& b) const {
    if (!cfg_ || !b.cfg_) throw ConfigError("uninitialized field element");
    if (cfg_ != b.cfg_ && !cfg_->same_modulus(*b.cfg_))
      throw ConfigError("mixed-config field operands");
  }

  const FieldConfig* cfg_;
  Limbs v_;

  friend FieldElement mod_inv_beea(const FieldElement&, std::uint64_t*);
};

// ---------------------------------------------------------------------------
// Constant-time BEEA inversion: exactly 2W-1 iterations, identical operation
// sequence for every input.  Loop body is shift/subtract only; one modmul at
// the end maps the result back into Montgomery form.
// ---------------------------------------------------------------------------

inline FieldElement mod_inv_beea(const FieldElement& a,
                                 std::uint64_t* iterations_out = nullptr) {
  const FieldConfig& f = a.config();
  if (a.is_zero()) throw NonInvertibleError(0);

  const std::size_t n = f.nlimbs;
  // Invariant: A * 2^i = U * m (mod q), B * 2^i = V * m (mod q),
  // with m the Montgomery representative of a.
  Limbs A = a.v_;
  Limbs B = f.modulus;
  Limbs U{};  // canonical residues mod q
  U[0] = 1;
  Limbs V{};

  const std::uint64_t total = 2ULL * f.bit_width - 1;
  for (std::uint64_t it = 0; it < total; ++it) {
    std::uint64_t odd_mask = (std::uint64_t)0 - (A[0] & 1);

    // need_swap = odd && (A < B)
    Limbs diff = A;
    std::uint64_t borrow = sub_limbs(diff, B, n);
    std::uint64_t swap_mask = odd_mask & ((std::uint64_t)0 - borrow);
    cswap_limbs(swap_mask, A, B, n);
    cswap_limbs(swap_mask, U, V, n);

    // if odd: A -= B (now A >= B), U -= V (mod q)
    Limbs sub = A;
    sub_limbs(sub, B, n);
    for (std::size_t i = 0; i < n; ++i)
      A[i] = (A[i] & ~odd_mask) | (sub[i] & odd_mask);

    Limbs u2 = U;
    mod_sub_limbs(u2, V, f);
    for (std::size_t i = 0; i < n; ++i)
      U[i] = (U[i] & ~odd_mask) | (u2[i] & odd_mask);

    shr1_limbs(A, n);
    mod_add_limbs(V, V, f);  // V *= 2 (exponent bookkeeping for B)
  }
  if (iterations_out) *iterations_out = total;

  // B = gcd = 1 and 2^(2W-1) = V * m (mod q); fold back to Montgomery form.
  FieldElement result = a;
  if (detail::tl_modmul) ++detail::tl_modmul->count;
  mont_mul_limbs(result.v_, V, f.beea_fixup, f);
  return result;
}

inline FieldElement inverse(const FieldElement& a) { return mod_inv_beea(a); }

// ---------------------------------------------------------------------------
// Montgomery batch inversion: one BEEA call plus 3(n-1) multiplications.
// Output order matches input order.
// ---------------------------------------------------------------------------

inline std::vector<FieldElement> batch_inverse(const std::vector<FieldElement>& xs) {
  const std::size_t n = xs.size();
  if (n == 0) return {};
  for (std::size_t i = 0; i < n; ++i)
    if (xs[i].is_zero()) throw NonInvertibleError(i);

  std::vector<FieldElement> partial(n);
  partial[0] = xs[0];
  for (std::size_t i = 1; i < n; ++i) partial[i] = partial[i - 1] * xs[i];

  FieldElement inv = mod_inv_beea(partial[n - 1]);

  std::vector<FieldElement> out(n);
  for (std::size_t i = n; i-- > 1;) {
    out[i] = inv * partial[i - 1];
    inv *= xs[i];
  }
  out[0] = inv;
  return out;
}

// ---------------------------------------------------------------------------
// Miller-Rabin with fixed small-prime bases (deterministic far beyond any
// modulus this model uses below 64 bits; strong probabilistic evidence above).
// ---------------------------------------------------------------------------

inline bool FieldConfig::is_probable_prime() const {
  static const std::uint64_t bases[] = {2,  3,  5,  7,  11, 13,
                                        17, 19, 23, 29, 31, 37};
  Limbs qm1 = modulus;
  Limbs one{};
  one[0] = 1;
  sub_limbs(qm1, one, nlimbs);
  if (is_zero_limbs(qm1, nlimbs)) return false;  // q == 1

  // q - 1 = d * 2^s
  Limbs d = qm1;
  std::uint32_t s = 0;
  while (!(d[0] & 1)) {
    shr1_limbs(d, nlimbs);
    ++s;
  }
  std::uint32_t dbits = bit_length(d, nlimbs);

  Limbs one_m = one_mont;
  Limbs m1_m;  // Montgomery form of q-1
  mont_mul_limbs(m1_m, qm1, r2, *this);

  for (std::uint64_t b : bases) {
    Limbs base{};
    base[0] = b;
    if (cmp_limbs(base, modulus, nlimbs) >= 0) continue;
    Limbs bm;
    mont_mul_limbs(bm, base, r2, *this);
    if (is_zero_limbs(bm, nlimbs)) continue;

    // x = b^d mod q (left-to-right square and multiply)
    Limbs x = one_mont;
    for (std::uint32_t i = dbits; i-- > 0;) {
      mont_mul_limbs(x, x, x, *this);
      if ((d[i / 64] >> (i % 64)) & 1) mont_mul_limbs(x, x, bm, *this);
    }
    if (cmp_limbs(x, one_m, nlimbs) == 0 || cmp_limbs(x, m1_m, nlimbs) == 0)
      continue;
    bool composite = true;
    for (std::uint32_t r = 1; r < s; ++r) {
      mont_mul_limbs(x, x, x, *this);
      if (cmp_limbs(x, m1_m, nlimbs) == 0) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace zkspeed::fp
