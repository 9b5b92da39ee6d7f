#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lrs {

class ByteWriter {
 public:
  void raw(const void* data, std::size_t len);
  void magic(const std::string& m) { raw(m.data(), m.size()); }
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v);
  void str(const std::string& s);
  // Unsigned value in exactly `width` little-endian bytes.
  void uint_le(std::uint64_t v, std::size_t width);

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : b_(bytes) {}

  void raw(void* out, std::size_t len);
  void expect_magic(const std::string& m);
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64();
  std::string str();
  std::uint64_t uint_le(std::size_t width);

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return b_.size() - pos_; }
  void expect_end() const;

 private:
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace lrs
