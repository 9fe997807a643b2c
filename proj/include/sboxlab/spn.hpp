#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "sboxlab/bundled.hpp"
#include "sboxlab/errors.hpp"
#include "sboxlab/random.hpp"
#include "sboxlab/rational.hpp"
#include "sboxlab/sbox.hpp"

namespace sboxlab {

/// 64-bit cipher state. Bit b lives in byte b/8 at position 7 - b%8, so
/// bit 0 is the most significant bit of byte 0.
using Block = std::array<std::uint8_t, 8>;

inline int block_bit(const Block& s, int b) { return (s[static_cast<std::size_t>(b / 8)] >> (7 - b % 8)) & 1; }

inline int block_distance(const Block& a, const Block& b) {
  int d = 0;
  for (std::size_t i = 0; i < 8; ++i) d += std::popcount(static_cast<unsigned>(a[i] ^ b[i]));
  return d;
}

inline Block flip_bit(Block s, int b) {
  s[static_cast<std::size_t>(b / 8)] ^= static_cast<std::uint8_t>(0x80u >> (b % 8));
  return s;
}

inline Block rotl_bytes(const Block& k, std::size_t r) {
  Block out{};
  for (std::size_t i = 0; i < 8; ++i) out[i] = k[(i + r) % 8];
  return out;
}

using BytePermutation = std::array<std::uint8_t, 8>;
using BitPermutation = std::array<std::uint8_t, 64>;

inline constexpr BytePermutation kDefaultPbox8 = {2, 7, 1, 5, 0, 6, 4, 3};

inline BitPermutation default_pbox64() {
  BitPermutation p{};
  const SBox dillon = dillon_apn_permutation();
  for (std::size_t i = 0; i < 64; ++i) p[i] = static_cast<std::uint8_t>(dillon[static_cast<Element>(i)]);
  return p;
}

template <std::size_t N>
bool is_index_permutation(const std::array<std::uint8_t, N>& p) {
  std::array<bool, N> seen{};
  for (auto v : p) {
    if (v >= N || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

template <std::size_t N>
std::array<std::uint8_t, N> invert_index_permutation(const std::array<std::uint8_t, N>& p) {
  std::array<std::uint8_t, N> inv{};
  for (std::size_t i = 0; i < N; ++i) inv[p[i]] = static_cast<std::uint8_t>(i);
  return inv;
}

/// Output byte i takes input byte p[i].
inline Block apply_pbox8(const Block& s, const BytePermutation& p) {
  if (!is_index_permutation(p)) throw PreconditionError("pbox8 is not a permutation of 0..7");
  Block out{};
  for (std::size_t i = 0; i < 8; ++i) out[i] = s[p[i]];
  return out;
}

/// Output bit i takes input bit p[i].
inline Block apply_pbox64(const Block& s, const BitPermutation& p) {
  if (!is_index_permutation(p)) throw PreconditionError("pbox64 is not a permutation of 0..63");
  Block out{};
  for (int i = 0; i < 64; ++i) {
    if (block_bit(s, p[static_cast<std::size_t>(i)])) out[static_cast<std::size_t>(i / 8)] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

struct SpnConfig {
  SBox sbox = aes_sbox();
  int rounds = 4;
  BytePermutation pbox8 = kDefaultPbox8;
  BitPermutation pbox64 = default_pbox64();
  SBox key_sbox = key_schedule_sbox();

  void validate() const {
    if (sbox.bits() != 8) throw PreconditionError("cipher S-box must be 8-bit");
    if (!is_bijective(sbox)) throw PreconditionError("cipher S-box must be a permutation");
    if (rounds < 0) throw ConfigError("rounds must be >= 0");
    if (!is_index_permutation(pbox8)) throw PreconditionError("pbox8 is not a permutation of 0..7");
    if (!is_index_permutation(pbox64)) throw PreconditionError("pbox64 is not a permutation of 0..63");
    if (key_sbox.bits() != 4 || !is_bijective(key_sbox)) throw PreconditionError("key S-box must be a 4-bit permutation");
  }
};

using RoundKeys = std::vector<Block>;

/// k_r = sub_nibbles(rotl(k_{r-1}, 1)) ^ (r in byte 0) ^ rotl(k_{r-1}, 3),
/// with k_0 = master. Returns k_1..k_rounds.
inline RoundKeys key_schedule(const Block& master, int rounds, const SBox& key_sbox) {
  RoundKeys keys;
  keys.reserve(static_cast<std::size_t>(std::max(rounds, 0)));
  Block prev = master;
  for (int r = 1; r <= rounds; ++r) {
    Block t = rotl_bytes(prev, 1);
    for (auto& byte : t) {
      byte = static_cast<std::uint8_t>((key_sbox[byte >> 4] << 4) | key_sbox[byte & 0x0F]);
    }
    t[0] ^= static_cast<std::uint8_t>(r & 0xFF);
    const Block back = rotl_bytes(prev, 3);
    for (std::size_t i = 0; i < 8; ++i) t[i] ^= back[i];
    keys.push_back(t);
    prev = t;
  }
  return keys;
}

inline RoundKeys key_schedule(const Block& master, int rounds, const SpnConfig& cfg) {
  return key_schedule(master, rounds, cfg.key_sbox);
}

/// Validated cipher with precomputed tables. Each round is
/// S-box layer, byte permutation, bit permutation, round-key XOR.
class SpnCipher {
 public:
  explicit SpnCipher(SpnConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    const SBox inv = inverse_sbox(cfg_.sbox);
    for (Element x = 0; x < 256; ++x) {
      sbox_[x] = static_cast<std::uint8_t>(cfg_.sbox[x]);
      inv_sbox_[x] = static_cast<std::uint8_t>(inv[x]);
    }
    inv_pbox8_ = invert_index_permutation(cfg_.pbox8);
    build_bit_tables(cfg_.pbox64, bit_table_);
    build_bit_tables(invert_index_permutation(cfg_.pbox64), inv_bit_table_);
  }

  const SpnConfig& config() const { return cfg_; }

  RoundKeys round_keys(const Block& master) const { return key_schedule(master, cfg_.rounds, cfg_.key_sbox); }

  Block encrypt(const Block& p, const RoundKeys& keys) const {
    Block s = p;
    for (const Block& k : keys) {
      Block t{};
      for (std::size_t i = 0; i < 8; ++i) t[i] = sbox_[s[cfg_.pbox8[i]]];
      s = permute_bits(t, bit_table_);
      for (std::size_t i = 0; i < 8; ++i) s[i] ^= k[i];
    }
    return s;
  }

  Block decrypt(const Block& c, const RoundKeys& keys) const {
    Block s = c;
    for (auto it = keys.rbegin(); it != keys.rend(); ++it) {
      for (std::size_t i = 0; i < 8; ++i) s[i] ^= (*it)[i];
      const Block t = permute_bits(s, inv_bit_table_);
      for (std::size_t i = 0; i < 8; ++i) s[i] = inv_sbox_[t[inv_pbox8_[i]]];
    }
    return s;
  }

  Block encrypt(const Block& p, const Block& master) const { return encrypt(p, round_keys(master)); }
  Block decrypt(const Block& c, const Block& master) const { return decrypt(c, round_keys(master)); }

 private:
  using BitTables = std::array<std::array<std::uint64_t, 256>, 8>;

  // tables[byte][v]: contribution of input byte value v, as a big-endian
  // word where block bit b is word bit 63 - b.
  static void build_bit_tables(const BitPermutation& p, BitTables& tables) {
    for (std::size_t byte = 0; byte < 8; ++byte) {
      for (std::size_t v = 0; v < 256; ++v) {
        std::uint64_t out = 0;
        for (std::size_t i = 0; i < 64; ++i) {
          const std::size_t src = p[i];
          if (src / 8 == byte && ((v >> (7 - src % 8)) & 1u)) out |= std::uint64_t{1} << (63 - i);
        }
        tables[byte][v] = out;
      }
    }
  }

  static Block permute_bits(const Block& s, const BitTables& tables) {
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < 8; ++i) w |= tables[i][s[i]];
    Block out{};
    for (std::size_t i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(w >> (56 - 8 * i));
    return out;
  }

  SpnConfig cfg_;
  std::array<std::uint8_t, 256> sbox_{};
  std::array<std::uint8_t, 256> inv_sbox_{};
  BytePermutation inv_pbox8_{};
  BitTables bit_table_{};
  BitTables inv_bit_table_{};
};

inline Block encrypt_block(const Block& p, const Block& master, const SpnConfig& cfg) {
  return SpnCipher(cfg).encrypt(p, master);
}

inline Block decrypt_block(const Block& c, const Block& master, const SpnConfig& cfg) {
  return SpnCipher(cfg).decrypt(c, master);
}

// ---------------------------------------------------------------------------
// Full-cipher avalanche

struct TrialPair {
  Block plaintext{};
  Block key{};
  friend bool operator==(const TrialPair&, const TrialPair&) = default;
};

/// Plaintext and key bytes come from one generator word each, least
/// significant byte first.
inline std::vector<TrialPair> generate_trial_pairs(std::uint64_t trials, std::uint64_t seed) {
  SeededRng rng(seed, 0xA5A1A4C3ull);
  std::vector<TrialPair> pairs(trials);
  auto fill = [&](Block& b) {
    const std::uint64_t w = rng.next();
    for (std::size_t i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(w >> (8 * i));
  };
  for (auto& p : pairs) {
    fill(p.plaintext);
    fill(p.key);
  }
  return pairs;
}

/// 16 bytes per trial: plaintext bytes 0..7 then key bytes 0..7.
inline void write_trial_pairs(const std::string& path, std::span<const TrialPair> pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open pair file for writing: " + path);
  for (const auto& p : pairs) {
    out.write(reinterpret_cast<const char*>(p.plaintext.data()), 8);
    out.write(reinterpret_cast<const char*>(p.key.data()), 8);
  }
  if (!out) throw ConfigError("failed writing pair file: " + path);
}

inline std::vector<TrialPair> read_trial_pairs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open pair file: " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.empty() || bytes.size() % 16 != 0) {
    throw ParseError("pair file size must be a positive multiple of 16 bytes: " + path);
  }
  std::vector<TrialPair> pairs(bytes.size() / 16);
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    for (std::size_t i = 0; i < 8; ++i) {
      pairs[t].plaintext[i] = static_cast<std::uint8_t>(bytes[16 * t + i]);
      pairs[t].key[i] = static_cast<std::uint8_t>(bytes[16 * t + 8 + i]);
    }
  }
  return pairs;
}

struct AvalancheReport {
  std::uint64_t trials = 0;
  int rounds = 0;
  std::int64_t total_flips = 0;       // over trials * 64 flip events
  std::int64_t total_abs_from_32 = 0; // sum of |flips - 32|
  std::array<std::int64_t, 64> per_bit_flips{};

  std::int64_t events() const { return static_cast<std::int64_t>(trials) * 64; }
  Rational mean_flips() const { return Rational(total_flips, events()); }
  /// |mean - 32|, the reported diffusion distance.
  Rational distance_from_32() const { return abs(mean_flips() - Rational(32)); }
  /// mean of |flips - 32| per event, exposed for comparison.
  Rational mean_abs_deviation() const { return Rational(total_abs_from_32, events()); }
  Rational per_bit_mean(int bit) const {
    return Rational(per_bit_flips[static_cast<std::size_t>(bit)], static_cast<std::int64_t>(trials));
  }
};

inline AvalancheReport avalanche_experiment(const SpnConfig& cfg, std::span<const TrialPair> pairs,
                                            unsigned workers = 1) {
  const SpnCipher cipher(cfg);
  if (pairs.empty()) throw ConfigError("avalanche experiment needs at least one trial");
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, pairs.size()));

  std::vector<AvalancheReport> partial(workers);
  auto run = [&](unsigned w) {
    AvalancheReport& rep = partial[w];
    const std::size_t first = pairs.size() * w / workers;
    const std::size_t last = pairs.size() * (w + 1) / workers;
    for (std::size_t t = first; t < last; ++t) {
      const RoundKeys keys = cipher.round_keys(pairs[t].key);
      const Block base = cipher.encrypt(pairs[t].plaintext, keys);
      for (int b = 0; b < 64; ++b) {
        const int d = block_distance(base, cipher.encrypt(flip_bit(pairs[t].plaintext, b), keys));
        rep.total_flips += d;
        rep.total_abs_from_32 += std::abs(d - 32);
        rep.per_bit_flips[static_cast<std::size_t>(b)] += d;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  AvalancheReport out;
  out.trials = pairs.size();
  out.rounds = cfg.rounds;
  for (const auto& p : partial) {
    out.total_flips += p.total_flips;
    out.total_abs_from_32 += p.total_abs_from_32;
    for (std::size_t b = 0; b < 64; ++b) out.per_bit_flips[b] += p.per_bit_flips[b];
  }
  return out;
}

/// Same seed, same pair set, whatever the S-box or round count.
inline AvalancheReport avalanche_experiment(const SpnConfig& cfg, std::uint64_t trials, std::uint64_t seed,
                                            unsigned workers = 1) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  const auto pairs = generate_trial_pairs(trials, seed);
  return avalanche_experiment(cfg, pairs, workers);
}

}  // namespace sboxlab
