#include "lrs/codec.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "lrs/error.hpp"

namespace lrs {

void ByteWriter::raw(const void* data, std::size_t len) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  bytes_.insert(bytes_.end(), p, p + len);
}

void ByteWriter::u32(std::uint32_t v) { uint_le(v, 4); }
void ByteWriter::u64(std::uint64_t v) { uint_le(v, 8); }

void ByteWriter::f64(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  u64(bits);
}

void ByteWriter::str(const std::string& s) {
  u32(static_cast<std::uint32_t>(s.size()));
  raw(s.data(), s.size());
}

void ByteWriter::uint_le(std::uint64_t v, std::size_t width) {
  for (std::size_t i = 0; i < width; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteReader::raw(void* out, std::size_t len) {
  if (remaining() < len) throw Error(Errc::bad_format, "truncated input");
  std::memcpy(out, b_.data() + pos_, len);
  pos_ += len;
}

void ByteReader::expect_magic(const std::string& m) {
  std::string got(m.size(), '\0');
  raw(got.data(), got.size());
  if (got != m) throw Error(Errc::bad_format, "expected magic " + m);
}

std::uint8_t ByteReader::u8() {
  std::uint8_t v;
  raw(&v, 1);
  return v;
}

std::uint32_t ByteReader::u32() { return static_cast<std::uint32_t>(uint_le(4)); }
std::uint64_t ByteReader::u64() { return uint_le(8); }

double ByteReader::f64() {
  std::uint64_t bits = u64();
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

std::string ByteReader::str() {
  const std::uint32_t n = u32();
  if (remaining() < n) throw Error(Errc::bad_format, "truncated string");
  std::string s(n, '\0');
  raw(s.data(), n);
  return s;
}

std::uint64_t ByteReader::uint_le(std::size_t width) {
  if (remaining() < width) throw Error(Errc::bad_format, "truncated input");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(b_[pos_ + i]) << (8 * i);
  pos_ += width;
  return v;
}

void ByteReader::expect_end() const {
  if (remaining() != 0) throw Error(Errc::bad_format, "trailing bytes");
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::bad_format, "cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::bad_format, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::bad_format, "write failed for " + path);
}

}  // namespace lrs
