#include "lrs/tape.hpp"

#include <cctype>

#include <openssl/evp.h>

#include "lrs/codec.hpp"
#include "lrs/error.hpp"

namespace lrs {

namespace {

constexpr char kDomain[] = "lrs-tape-v1";

}  // namespace

Digest sha256(const std::uint8_t* data, std::size_t len) {
  Digest d{};
  unsigned int out_len = 0;
  if (EVP_Digest(data, len, d.data(), &out_len, EVP_sha256(), nullptr) != 1 || out_len != d.size()) {
    throw Error(Errc::invalid_argument, "SHA-256 failed");
  }
  return d;
}

Digest sha256(const std::vector<std::uint8_t>& data) { return sha256(data.data(), data.size()); }

Seed seed_from_hex(const std::string& hex) {
  if (hex.empty() || hex.size() > 64) throw Error(Errc::invalid_argument, "seed must have 1..64 hex digits");
  Seed s{};
  std::size_t nibble = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, ++nibble) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(*it)));
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else throw Error(Errc::invalid_argument, "seed is not hex");
    const std::size_t byte = 31 - nibble / 2;
    s[byte] |= static_cast<std::uint8_t>(nibble % 2 ? v << 4 : v);
  }
  return s;
}

std::string to_hex(const std::uint8_t* data, std::size_t len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 15]);
  }
  return out;
}

RandomTape::RandomTape(const Seed& seed, std::string stream_id) : seed_(seed), stream_(std::move(stream_id)) {}

RandomTape RandomTape::explicit_words(const Seed& seed, std::vector<std::uint64_t> words) {
  RandomTape t;
  t.seed_ = seed;
  t.stream_ = "explicit";
  t.explicit_ = true;
  t.words_ = std::move(words);
  return t;
}

std::uint64_t RandomTape::word_at(std::uint64_t index) const {
  if (explicit_) {
    if (index >= words_.size()) throw Error(Errc::tape_exhausted, "explicit tape has " + std::to_string(words_.size()) + " words");
    return words_[index];
  }
  const std::uint64_t block = index / 4;
  if (block != cached_block_) {
    ByteWriter w;
    w.raw(kDomain, sizeof kDomain - 1);
    w.raw(seed_.data(), seed_.size());
    w.str(stream_);
    w.u64(block);
    Digest d = sha256(w.bytes());
    for (int i = 0; i < 4; ++i) {
      std::uint64_t v = 0;
      for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(d[8 * i + b]) << (8 * b);
      block_[i] = v;
    }
    cached_block_ = block;
  }
  return block_[index % 4];
}

std::uint64_t RandomTape::next() {
  const std::uint64_t v = word_at(cursor_);
  ++cursor_;
  return v;
}

std::vector<std::uint64_t> RandomTape::words(std::uint64_t from, std::uint64_t count) const {
  std::vector<std::uint64_t> out(count);
  for (std::uint64_t i = 0; i < count; ++i) out[i] = word_at(from + i);
  return out;
}

std::vector<std::uint8_t> serialize_tape(const Seed& seed, const std::vector<std::uint64_t>& words) {
  ByteWriter w;
  w.magic("LRSTAPE1");
  w.raw(seed.data(), seed.size());
  w.u64(words.size());
  for (auto v : words) w.u64(v);
  return w.bytes();
}

RandomTape parse_tape(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  r.expect_magic("LRSTAPE1");
  Seed s{};
  r.raw(s.data(), s.size());
  const std::uint64_t n = r.u64();
  if (n > r.remaining() / 8) throw Error(Errc::bad_format, "tape word count exceeds file size");
  std::vector<std::uint64_t> words(n);
  for (auto& v : words) v = r.u64();
  r.expect_end();
  return RandomTape::explicit_words(s, std::move(words));
}

}  // namespace lrs
