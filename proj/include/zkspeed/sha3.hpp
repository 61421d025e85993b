#pragma once

// Compact software SHA3-256 (Keccak-f[1600], rate 136, domain 0x06).

#include <array>
#include <cstdint>
#include <cstring>

namespace zkspeed::sha3 {

namespace detail {

inline std::uint64_t rotl64(std::uint64_t x, int s) {
  return (x << s) | (x >> (64 - s));
}

inline void keccakf(std::uint64_t st[25]) {
  static const std::uint64_t rc[24] = {
      0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
      0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
      0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
      0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
      0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
      0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
      0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
      0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};
  static const int rotc[24] = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                               27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};
  static const int piln[24] = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                               15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};

  for (int round = 0; round < 24; ++round) {
    std::uint64_t bc[5];
    for (int i = 0; i < 5; ++i)
      bc[i] = st[i] ^ st[i + 5] ^ st[i + 10] ^ st[i + 15] ^ st[i + 20];
    for (int i = 0; i < 5; ++i) {
      std::uint64_t t = bc[(i + 4) % 5] ^ rotl64(bc[(i + 1) % 5], 1);
      for (int j = 0; j < 25; j += 5) st[j + i] ^= t;
    }
    std::uint64_t t = st[1];
    for (int i = 0; i < 24; ++i) {
      int j = piln[i];
      std::uint64_t tmp = st[j];
      st[j] = rotl64(t, rotc[i]);
      t = tmp;
    }
    for (int j = 0; j < 25; j += 5) {
      for (int i = 0; i < 5; ++i) bc[i] = st[j + i];
      for (int i = 0; i < 5; ++i)
        st[j + i] = bc[i] ^ (~bc[(i + 1) % 5] & bc[(i + 2) % 5]);
    }
    st[0] ^= rc[round];
  }
}

}  // namespace detail

using Digest = std::array<std::uint8_t, 32>;

inline Digest sha3_256(const std::uint8_t* data, std::size_t len) {
  constexpr std::size_t rate = 136;
  std::uint64_t st[25] = {0};
  auto* bytes = reinterpret_cast<std::uint8_t*>(st);

  std::size_t off = 0;
  while (len - off >= rate) {
    for (std::size_t i = 0; i < rate; ++i) bytes[i] ^= data[off + i];
    detail::keccakf(st);
    off += rate;
  }
  for (std::size_t i = 0; i < len - off; ++i) bytes[i] ^= data[off + i];
  bytes[len - off] ^= 0x06;
  bytes[rate - 1] ^= 0x80;
  detail::keccakf(st);

  Digest out;
  std::memcpy(out.data(), bytes, 32);
  return out;
}

}  // namespace zkspeed::sha3
