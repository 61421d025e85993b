#pragma once

// SHA3-256 Fiat-Shamir transcript.  The running state chains every absorbed
// record, so the challenge sequence is a function of the exact absorb order.
//
// Byte format (bit-exact across implementations):
//   absorb:    state' = SHA3-256(state || len(label) BE4 || label
//                                      || len(data) BE4  || data)
//   challenge: h = SHA3-256(state || len(label) BE4 || label)
//              c = BE-integer(h) mod q,  state' = h

#include <cstdint>
#include <string>
#include <vector>

#include "zkspeed/fp.hpp"
#include "zkspeed/sha3.hpp"

namespace zkspeed::transcript {

using fp::FieldConfig;
using fp::FieldElement;

// 256-bit big-endian digest reduced mod q (any q, including tiny test fields).
inline FieldElement reduce_be_bytes(const FieldConfig& cfg,
                                    const std::uint8_t* bytes, std::size_t len) {
  auto acc = FieldElement::zero(cfg);
  auto c256 = FieldElement::from_u64(cfg, 256);
  fp::ModmulPause pause;  // transcript arithmetic is not kernel work
  for (std::size_t i = 0; i < len; ++i)
    acc = acc * c256 + FieldElement::from_u64(cfg, bytes[i]);
  return acc;
}

class Transcript {
 public:
  Transcript() { state_.fill(0); }

  void absorb(const std::string& label, const std::uint8_t* data, std::size_t len) {
    std::vector<std::uint8_t> buf;
    buf.reserve(32 + 8 + label.size() + len);
    buf.insert(buf.end(), state_.begin(), state_.end());
    put_be32(buf, (std::uint32_t)label.size());
    buf.insert(buf.end(), label.begin(), label.end());
    put_be32(buf, (std::uint32_t)len);
    buf.insert(buf.end(), data, data + len);
    state_ = sha3::sha3_256(buf.data(), buf.size());
    ++absorb_count_;
  }

  void absorb(const std::string& label, const std::vector<std::uint8_t>& data) {
    absorb(label, data.data(), data.size());
  }

  void absorb_field(const std::string& label, const FieldElement& x) {
    std::vector<std::uint8_t> buf(x.config().canonical_bytes());
    x.to_bytes_le(buf.data());
    absorb(label, buf);
  }

  void absorb_fields(const std::string& label, const std::vector<FieldElement>& xs) {
    std::vector<std::uint8_t> buf;
    if (!xs.empty()) {
      std::size_t nb = xs[0].config().canonical_bytes();
      buf.resize(nb * xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i)
        xs[i].to_bytes_le(buf.data() + i * nb);
    }
    absorb(label, buf);
  }

  FieldElement challenge(const std::string& label, const FieldConfig& cfg) {
    std::vector<std::uint8_t> buf;
    buf.reserve(32 + 4 + label.size());
    buf.insert(buf.end(), state_.begin(), state_.end());
    put_be32(buf, (std::uint32_t)label.size());
    buf.insert(buf.end(), label.begin(), label.end());
    auto h = sha3::sha3_256(buf.data(), buf.size());
    state_ = h;
    ++challenge_count_;
    return reduce_be_bytes(cfg, h.data(), h.size());
  }

  std::vector<FieldElement> challenge_vector(const std::string& label,
                                             const FieldConfig& cfg, std::size_t n) {
    std::vector<FieldElement> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(challenge(label, cfg));
    return out;
  }

  const sha3::Digest& state() const { return state_; }
  std::uint64_t challenge_count() const { return challenge_count_; }
  std::uint64_t absorb_count() const { return absorb_count_; }

 private:
  static void put_be32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
    for (int i = 3; i >= 0; --i) buf.push_back((std::uint8_t)(v >> (8 * i)));
  }

  sha3::Digest state_{};
  std::uint64_t challenge_count_ = 0;
  std::uint64_t absorb_count_ = 0;
};

}  // namespace zkspeed::transcript
