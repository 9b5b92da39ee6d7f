#include <string>

#include "lrs/codec.hpp"
#include "lrs/scheme.hpp"

namespace lrs {

namespace {

std::size_t entry_bytes(std::uint64_t q) { return (gadget_bits(q) + 7) / 8; }

void put_matrix(ByteWriter& w, const ZqMatrix& a) {
  const std::size_t width = entry_bytes(a.modulus());
  for (std::uint64_t v : a.data()) w.uint_le(v, width);
}

ZqMatrix get_matrix(ByteReader& r, std::size_t n, std::size_t m, std::uint64_t q) {
  const std::size_t width = entry_bytes(q);
  ZqMatrix a(n, m, q);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint64_t v = r.uint_le(width);
      if (v >= q) throw Error(Errc::bad_format, "matrix entry not reduced mod q");
      a.set(i, j, v);
    }
  }
  return a;
}

void put_mpz(ByteWriter& w, const mpz_class& v) {
  std::size_t count = 0;
  std::vector<std::uint8_t> buf((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
  mpz_export(buf.data(), &count, -1, 1, 0, 0, v.get_mpz_t());
  w.u32(static_cast<std::uint32_t>(count));
  w.raw(buf.data(), count);
}

mpz_class get_mpz(ByteReader& r) {
  const std::uint32_t len = r.u32();
  if (len > r.remaining()) throw Error(Errc::bad_format, "truncated integer");
  std::vector<std::uint8_t> buf(len);
  r.raw(buf.data(), len);
  mpz_class v;
  if (len) mpz_import(v.get_mpz_t(), len, -1, 1, 0, 0, buf.data());
  return v;
}

void put_bits(ByteWriter& w, const std::vector<std::uint8_t>& bits) {
  w.u32(static_cast<std::uint32_t>(bits.size()));
  std::vector<std::uint8_t> packed((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  w.raw(packed.data(), packed.size());
}

std::vector<std::uint8_t> get_bits(ByteReader& r) {
  const std::uint32_t n = r.u32();
  if ((n + 7ull) / 8 > r.remaining()) throw Error(Errc::bad_format, "truncated bit string");
  std::vector<std::uint8_t> packed((n + 7) / 8);
  r.raw(packed.data(), packed.size());
  std::vector<std::uint8_t> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = (packed[i / 8] >> (i % 8)) & 1;
  if (n % 8 && (packed.back() >> (n % 8)) != 0) throw Error(Errc::bad_format, "nonzero padding bits");
  return bits;
}

std::vector<std::uint8_t> vk_body(const PublicParams& pp, const VerificationKey& vk) {
  ByteWriter w;
  w.magic("LRSVK01");
  w.u32(static_cast<std::uint32_t>(pp.n));
  w.u32(static_cast<std::uint32_t>(pp.m));
  w.u64(pp.q64());
  put_matrix(w, vk.a);
  put_matrix(w, vk.a0);
  put_matrix(w, vk.a1);
  for (const ZqMatrix& b : vk.b) put_matrix(w, b);
  put_matrix(w, vk.c0);
  put_matrix(w, vk.c1);
  return w.bytes();
}

}  // namespace

Digest vk_fingerprint(const PublicParams& pp, const VerificationKey& vk) { return sha256(vk_body(pp, vk)); }

std::vector<std::uint8_t> serialize_params(const PublicParams& pp) {
  ByteWriter w;
  w.magic("LRSPAR1");
  w.u32(static_cast<std::uint32_t>(pp.n));
  w.u32(static_cast<std::uint32_t>(pp.m));
  w.u32(static_cast<std::uint32_t>(pp.k));
  w.u32(static_cast<std::uint32_t>(pp.t));
  put_mpz(w, pp.q);
  w.f64(pp.sigma);
  w.f64(pp.sigma_prime);
  w.f64(pp.omega_const);
  w.f64(pp.tail_cut);
  w.str(pp.prf.name);
  const std::vector<std::uint8_t> cir = serialize_circuit(pp.prf);
  w.u32(static_cast<std::uint32_t>(cir.size()));
  w.raw(cir.data(), cir.size());
  w.str(preset_name(pp.preset));
  w.u8(pp.toy ? 1 : 0);
  w.raw(pp.setup_digest.data(), pp.setup_digest.size());
  w.u32(static_cast<std::uint32_t>(pp.n_max));
  w.f64(pp.delta);
  return w.bytes();
}

PublicParams parse_params(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  r.expect_magic("LRSPAR1");
  PublicParams pp;
  pp.n = r.u32();
  pp.m = r.u32();
  pp.k = r.u32();
  pp.t = r.u32();
  pp.q = get_mpz(r);
  pp.sigma = r.f64();
  pp.sigma_prime = r.f64();
  pp.omega_const = r.f64();
  pp.tail_cut = r.f64();
  const std::string name = r.str();
  const std::uint32_t cir_len = r.u32();
  if (cir_len > r.remaining()) throw Error(Errc::bad_format, "truncated circuit");
  std::vector<std::uint8_t> cir(cir_len);
  r.raw(cir.data(), cir_len);
  pp.prf = parse_circuit(cir);
  pp.prf.name = name;
  try {
    pp.preset = parse_preset(r.str());
  } catch (const Error& e) {
    throw Error(Errc::bad_format, e.what());
  }
  const std::uint8_t toy = r.u8();
  if (toy > 1) throw Error(Errc::bad_format, "toy flag must be 0 or 1");
  pp.toy = toy == 1;
  r.raw(pp.setup_digest.data(), pp.setup_digest.size());
  pp.n_max = r.u32();
  pp.delta = r.f64();
  r.expect_end();
  if (pp.prf.k != pp.k || pp.prf.t != pp.t) throw Error(Errc::bad_format, "circuit arity differs from k, t");
  return pp;
}

std::vector<std::uint8_t> serialize_vk(const PublicParams& pp, const VerificationKey& vk) {
  std::vector<std::uint8_t> out = vk_body(pp, vk);
  out.insert(out.end(), vk.fingerprint.begin(), vk.fingerprint.end());
  return out;
}

VerificationKey parse_vk(const PublicParams& pp, const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  r.expect_magic("LRSVK01");
  const std::size_t n = r.u32();
  const std::size_t m = r.u32();
  const std::uint64_t q = r.u64();
  if (n != pp.n || m != pp.m || q != pp.q64()) throw Error(Errc::bad_format, "key dimensions differ from parameters");
  const std::size_t mat_bytes = n * m * entry_bytes(q);
  if (r.remaining() != (5 + pp.k) * mat_bytes + 32) throw Error(Errc::bad_format, "key length differs from parameters");
  VerificationKey vk;
  vk.a = get_matrix(r, n, m, q);
  vk.a0 = get_matrix(r, n, m, q);
  vk.a1 = get_matrix(r, n, m, q);
  for (std::size_t j = 0; j < pp.k; ++j) vk.b.push_back(get_matrix(r, n, m, q));
  vk.c0 = get_matrix(r, n, m, q);
  vk.c1 = get_matrix(r, n, m, q);
  r.raw(vk.fingerprint.data(), vk.fingerprint.size());
  r.expect_end();
  if (vk_fingerprint(pp, vk) != vk.fingerprint) throw Error(Errc::bad_format, "fingerprint does not match key content");
  return vk;
}

std::vector<std::uint8_t> serialize_sk(const SigningKey& sk) {
  if (!sk.s.fits_int64()) throw Error(Errc::overflow, "trapdoor entry exceeds 64 bits");
  ByteWriter w;
  w.magic("LRSSK01");
  w.u32(static_cast<std::uint32_t>(sk.s.rows()));
  for (std::int64_t v : sk.s.to_int64()) w.i64(v);
  put_bits(w, sk.prf_key);
  w.raw(sk.vk_fingerprint.data(), sk.vk_fingerprint.size());
  return w.bytes();
}

SigningKey parse_sk(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  r.expect_magic("LRSSK01");
  const std::size_t m = r.u32();
  if (m == 0 || m > (1u << 15) || m * m > r.remaining() / 8) throw Error(Errc::bad_format, "trapdoor size");
  SigningKey sk;
  sk.s = IntMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) sk.s(i, j) = static_cast<long>(r.i64());
  }
  sk.prf_key = get_bits(r);
  r.raw(sk.vk_fingerprint.data(), sk.vk_fingerprint.size());
  r.expect_end();
  return sk;
}

std::vector<std::uint8_t> serialize_ring(const PublicParams& pp, const Ring& ring) {
  ByteWriter w;
  w.magic("LRSRING1");
  w.u32(static_cast<std::uint32_t>(ring.size()));
  for (const VerificationKey& vk : ring.members) {
    const std::vector<std::uint8_t> rec = serialize_vk(pp, vk);
    w.u32(static_cast<std::uint32_t>(rec.size()));
    w.raw(rec.data(), rec.size());
  }
  return w.bytes();
}

Ring parse_ring(const PublicParams& pp, const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  r.expect_magic("LRSRING1");
  const std::uint32_t count = r.u32();
  Ring ring;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t len = r.u32();
    if (len > r.remaining()) throw Error(Errc::bad_format, "truncated ring record");
    std::vector<std::uint8_t> rec(len);
    r.raw(rec.data(), len);
    ring.members.push_back(parse_vk(pp, rec));
  }
  r.expect_end();
  return ring;
}

std::vector<std::uint8_t> serialize_signature(const Signature& sig) {
  ByteWriter w;
  w.magic("LRSSIG1");
  w.u32(static_cast<std::uint32_t>(sig.n_ring));
  w.u32(static_cast<std::uint32_t>(sig.m));
  for (std::int64_t v : sig.x) w.i64(v);
  return w.bytes();
}

Signature parse_signature(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  r.expect_magic("LRSSIG1");
  Signature sig;
  sig.n_ring = r.u32();
  sig.m = r.u32();
  const std::uint64_t len = 2ull * sig.n_ring * sig.m;
  if (len * 8 != r.remaining()) throw Error(Errc::bad_format, "signature length differs from 2 N m");
  sig.x.resize(len);
  for (auto& v : sig.x) v = r.i64();
  return sig;
}

}  // namespace lrs
