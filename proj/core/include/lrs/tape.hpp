#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lrs {

using Seed = std::array<std::uint8_t, 32>;
using Digest = std::array<std::uint8_t, 32>;

Digest sha256(const std::uint8_t* data, std::size_t len);
Digest sha256(const std::vector<std::uint8_t>& data);

// Parses 1..64 hex digits as a big-endian 256-bit value.
Seed seed_from_hex(const std::string& hex);
std::string to_hex(const std::uint8_t* data, std::size_t len);

// Deterministic stream of 64-bit words.
//
// Seeded tapes expand word i as part of SHA-256(domain | seed | stream-id |
// block), four words per block. Explicit tapes replay a stored word list and
// fail once it is exhausted.
class RandomTape {
 public:
  RandomTape(const Seed& seed, std::string stream_id);
  static RandomTape explicit_words(const Seed& seed, std::vector<std::uint64_t> words);

  std::uint64_t next();
  std::uint64_t word_at(std::uint64_t index) const;

  std::uint64_t cursor() const { return cursor_; }
  const Seed& seed() const { return seed_; }
  const std::string& stream_id() const { return stream_; }
  bool is_explicit() const { return explicit_; }
  std::size_t explicit_size() const { return words_.size(); }

  // Words [from, from + count) as an explicit list.
  std::vector<std::uint64_t> words(std::uint64_t from, std::uint64_t count) const;

 private:
  RandomTape() = default;

  Seed seed_{};
  std::string stream_;
  bool explicit_ = false;
  std::vector<std::uint64_t> words_;
  std::uint64_t cursor_ = 0;
  mutable std::uint64_t cached_block_ = ~0ULL;
  mutable std::array<std::uint64_t, 4> block_{};
};

// LRSTAPE1 framing: magic, seed, u64 count, raw u64 words (little-endian).
std::vector<std::uint8_t> serialize_tape(const Seed& seed, const std::vector<std::uint64_t>& words);
RandomTape parse_tape(const std::vector<std::uint8_t>& bytes);

}  // namespace lrs
