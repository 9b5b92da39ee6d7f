#include "lrs/scheme.hpp"

#include <cmath>
#include <string>

#include "detail.hpp"
#include "lrs/homeval.hpp"

namespace lrs {

const char* preset_name(Preset p) { return p == Preset::toy ? "toy" : "paper-asymptotic"; }

Preset parse_preset(const std::string& s) {
  if (s == "toy") return Preset::toy;
  if (s == "paper-asymptotic") return Preset::paper_asymptotic;
  throw Error(Errc::invalid_argument, "unknown preset '" + s + "'");
}

bool PublicParams::executable() const { return q.fits_ulong_p() && q.get_ui() < (1ULL << 31) && q > 2; }

std::uint64_t PublicParams::q64() const {
  if (!executable()) throw Error(Errc::unsatisfiable_params, "modulus exceeds the executable range (< 2^31)");
  return q.get_ui();
}

GaussConfig PublicParams::gauss() const {
  GaussConfig c;
  c.tail_cut = tail_cut;
  c.omega_const = omega_const;
  return c;
}

// ---- setup ----

namespace {

mpz_class next_prime_at_least(const mpz_class& v) {
  if (v <= 2) return 3;
  mpz_class p;
  mpz_class start = v - 1;
  mpz_nextprime(p.get_mpz_t(), start.get_mpz_t());
  if (p == 2) p = 3;
  return p;
}

long double omega_of(long double x, long double c) { return x < 2 ? 0.0L : c * std::sqrt(std::log2(x)); }

}  // namespace

PublicParams setup(const SetupOptions& opt, const RandomTape& tape) {
  if (opt.n < 2) throw Error(Errc::unsatisfiable_params, "n must be at least 2");
  if (opt.k < 1 || opt.t < 1) throw Error(Errc::unsatisfiable_params, "k and t must be positive");
  if (opt.n_max < 2) throw Error(Errc::unsatisfiable_params, "ring size bound must be at least 2");
  if (!(opt.omega_const > 0) || !(opt.tail_cut > 0)) throw Error(Errc::unsatisfiable_params, "omega and tail cut must be positive");
  PublicParams pp;
  pp.n = opt.n;
  pp.k = opt.k;
  pp.t = opt.t;
  pp.preset = opt.preset;
  pp.n_max = opt.n_max;
  pp.delta = opt.delta;
  pp.omega_const = opt.omega_const;
  pp.tail_cut = opt.tail_cut;
  pp.prf = toy_prf(opt.k, opt.t, opt.rounds);

  const long double d = static_cast<long double>(pp.prf.circuit.depth());
  const long double growth = std::pow(4.0L, d);  // l^(2c) with c = d / log2 l
  const long double c = opt.omega_const;

  if (opt.preset == Preset::toy) {
    mpz_class n4 = mpz_class(static_cast<unsigned long>(opt.n));
    n4 = n4 * n4 * n4 * n4;
    pp.q = next_prime_at_least(n4);
    if (!pp.executable()) throw Error(Errc::unsatisfiable_params, "toy modulus n^4 exceeds 2^31");
    const std::size_t kb = gadget_bits(pp.q.get_ui());
    pp.m = 2 * opt.n * kb + kb;
    pp.toy = true;
  } else {
    if (!(opt.delta > 0)) throw Error(Errc::unsatisfiable_params, "delta must be positive");
    pp.m = static_cast<std::size_t>(std::ceil(6.0L * std::pow(static_cast<long double>(opt.n), 1.0L + opt.delta) - 1e-9L));
    pp.toy = false;
  }
  const long double m = static_cast<long double>(pp.m);
  const long double w = omega_of(static_cast<long double>(opt.n_max) * m, c);
  const long double sigma = growth * std::pow(m, 1.5L) * w;
  const long double sigma_p = std::sqrt(static_cast<long double>(opt.n_max)) * growth * m * m * w * w;
  pp.sigma = static_cast<double>(sigma);
  pp.sigma_prime = static_cast<double>(sigma_p);
  if (opt.preset == Preset::paper_asymptotic) {
    // beta >= l^(2c) m^(3/2) sigma sqrt(2m), q >= beta omega(sqrt(n log n)).
    const long double nl = static_cast<long double>(opt.n);
    const long double beta = growth * std::pow(m, 1.5L) * sigma * std::sqrt(2 * m);
    const long double bound = beta * c * std::sqrt(nl * std::log2(nl));
    mpz_class b;
    mpz_set_d(b.get_mpz_t(), static_cast<double>(std::ceil(bound)));
    pp.q = next_prime_at_least(b);
  }
  if (!std::isfinite(pp.sigma) || !std::isfinite(pp.sigma_prime)) {
    throw Error(Errc::unsatisfiable_params, "Gaussian parameters overflow");
  }

  std::vector<std::uint8_t> buf(tape.seed().begin(), tape.seed().end());
  buf.insert(buf.end(), tape.stream_id().begin(), tape.stream_id().end());
  pp.setup_digest = sha256(buf);
  return pp;
}

std::vector<std::string> check_params(const PublicParams& pp) {
  std::vector<std::string> bad;
  if (mpz_probab_prime_p(pp.q.get_mpz_t(), 30) == 0) bad.push_back("q is not prime");
  if (pp.prf.k != pp.k || pp.prf.t != pp.t || pp.prf.circuit.inputs() != pp.k + pp.t) {
    bad.push_back("PRF circuit arity differs from k + t");
  }
  if (!(pp.sigma_prime >= pp.sigma)) bad.push_back("sigma' < sigma");
  if (!(pp.sigma > 0)) bad.push_back("sigma not positive");
  if (pp.preset == Preset::toy) {
    if (!pp.executable()) {
      bad.push_back("toy modulus outside executable range");
    } else {
      const std::size_t kb = gadget_bits(pp.q.get_ui());
      if (pp.m < 2 * pp.n * kb) bad.push_back("m < 2 n ceil(log2 q)");
      if (pp.m < pp.n * kb + kb) bad.push_back("m < n ceil(log2 q) + gadget width");
    }
    if (!pp.toy) bad.push_back("toy preset without toy flag");
  }
  return bad;
}

// ---- keys ----

namespace {

ZqMatrix uniform_matrix(std::size_t n, std::size_t m, std::uint64_t q, RandomTape& tape) {
  ZqMatrix a(n, m, q);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) a.set(r, c, tape.next() % q);
  }
  return a;
}

IntMatrix sign_matrix(std::size_t m, RandomTape& tape) {
  IntMatrix r(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) r(i, j) = (tape.next() & 1) ? 1 : -1;
  }
  return r;
}

ZqMatrix encode(const ZqMatrix& a, const IntMatrix& r, std::uint8_t bit, const ZqMatrix& g) {
  ZqMatrix out = mat_mul_mod(a, r);
  return bit ? add_mod(out, g) : out;
}

}  // namespace

KeyPair keygen(const PublicParams& pp, RandomTape& tape) {
  const std::uint64_t q = pp.q64();
  TrapdoorPair tg = trap_gen(pp.n, pp.m, q, tape);
  KeyPair kp;
  kp.sk.prf_key.resize(pp.k);
  for (auto& bit : kp.sk.prf_key) bit = static_cast<std::uint8_t>(tape.next() & 1);
  kp.vk.a = std::move(tg.a);
  kp.vk.a0 = uniform_matrix(pp.n, pp.m, q, tape);
  kp.vk.a1 = uniform_matrix(pp.n, pp.m, q, tape);
  kp.vk.c0 = uniform_matrix(pp.n, pp.m, q, tape);
  kp.vk.c1 = uniform_matrix(pp.n, pp.m, q, tape);
  for (std::size_t j = 0; j < pp.k; ++j) kp.vk.b.push_back(uniform_matrix(pp.n, pp.m, q, tape));
  kp.vk.fingerprint = vk_fingerprint(pp, kp.vk);
  kp.sk.s = std::move(tg.s);
  kp.sk.vk_fingerprint = kp.vk.fingerprint;
  return kp;
}

SimKeyPair keygen_simulated(const PublicParams& pp, const std::vector<std::uint8_t>& shared_key, RandomTape& tape) {
  if (shared_key.size() != pp.k) throw Error(Errc::length_mismatch, "shared PRF key length");
  const std::uint64_t q = pp.q64();
  TrapdoorPair tg = trap_gen(pp.n, pp.m, q, tape);
  const ZqMatrix g = gadget_matrix(pp.n, q, pp.m);
  SimKeyPair kp;
  kp.sim.r_a0 = sign_matrix(pp.m, tape);
  kp.sim.r_a1 = sign_matrix(pp.m, tape);
  kp.sim.r_c0 = sign_matrix(pp.m, tape);
  kp.sim.r_c1 = sign_matrix(pp.m, tape);
  for (std::size_t j = 0; j < pp.k; ++j) kp.sim.r_b.push_back(sign_matrix(pp.m, tape));
  kp.vk.a = std::move(tg.a);
  kp.vk.a0 = encode(kp.vk.a, kp.sim.r_a0, 0, g);
  kp.vk.a1 = encode(kp.vk.a, kp.sim.r_a1, 1, g);
  kp.vk.c0 = encode(kp.vk.a, kp.sim.r_c0, 0, g);
  kp.vk.c1 = encode(kp.vk.a, kp.sim.r_c1, 1, g);
  for (std::size_t j = 0; j < pp.k; ++j) kp.vk.b.push_back(encode(kp.vk.a, kp.sim.r_b[j], shared_key[j] ? 1 : 0, g));
  kp.vk.fingerprint = vk_fingerprint(pp, kp.vk);
  kp.sk.s = std::move(tg.s);
  kp.sk.prf_key = shared_key;
  kp.sk.vk_fingerprint = kp.vk.fingerprint;
  return kp;
}

void check_ring(const PublicParams& pp, const Ring& ring) {
  if (ring.size() < 2) throw Error(Errc::invalid_argument, "ring needs at least two members");
  const std::uint64_t q = pp.q64();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const VerificationKey& vk = ring.members[i];
    if (vk.b.size() != pp.k) throw Error(Errc::dimension_mismatch, "member " + std::to_string(i) + " has wrong B count");
    for (const ZqMatrix* mat : {&vk.a, &vk.a0, &vk.a1, &vk.c0, &vk.c1}) {
      if (mat->rows() != pp.n || mat->cols() != pp.m || mat->modulus() != q) {
        throw Error(Errc::dimension_mismatch, "member " + std::to_string(i) + " matrix shape");
      }
    }
    for (const ZqMatrix& mat : vk.b) {
      if (mat.rows() != pp.n || mat.cols() != pp.m || mat.modulus() != q) {
        throw Error(Errc::dimension_mismatch, "member " + std::to_string(i) + " matrix shape");
      }
    }
    if (vk_fingerprint(pp, vk) != vk.fingerprint) throw Error(Errc::bad_format, "member " + std::to_string(i) + " fingerprint mismatch");
    for (std::size_t j = 0; j < i; ++j) {
      if (ring.members[j].fingerprint == vk.fingerprint) throw Error(Errc::invalid_argument, "duplicate ring member");
    }
    if (rank_mod(vk.a) < pp.n) throw Error(Errc::block_not_spanning, "member " + std::to_string(i) + " A lacks full row rank");
  }
}

std::size_t locate_signer(const Ring& ring, const SigningKey& sk) {
  std::size_t found = ring.size();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (ring.members[i].fingerprint != sk.vk_fingerprint) continue;
    if (found != ring.size()) throw Error(Errc::signer_not_in_ring, "signing key matches several ring members");
    found = i;
  }
  if (found == ring.size()) throw Error(Errc::signer_not_in_ring, "signing key is not in the ring");
  return found;
}

// ---- ring equation ----

ZqMatrix eval_prf_matrix(const PublicParams& pp, const VerificationKey& vk, const std::vector<std::uint8_t>& mu) {
  if (mu.size() != pp.t) throw Error(Errc::length_mismatch, "message must have " + std::to_string(pp.t) + " bits");
  std::vector<ZqMatrix> wires(vk.b);
  for (std::uint8_t bit : mu) wires.push_back(bit ? vk.c1 : vk.c0);
  return eval_public(pp.prf.circuit, wires);
}

namespace {

std::vector<ZqMatrix> prf_matrices(const PublicParams& pp, const Ring& ring, const std::vector<std::uint8_t>& mu) {
  std::vector<ZqMatrix> out;
  for (const VerificationKey& vk : ring.members) out.push_back(eval_prf_matrix(pp, vk, mu));
  return out;
}

ZqMatrix assemble_F(const Ring& ring, const std::vector<ZqMatrix>& acs, int b) {
  std::vector<ZqMatrix> blocks;
  blocks.reserve(2 * ring.size());
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const VerificationKey& vk = ring.members[i];
    blocks.push_back(vk.a);
    blocks.push_back(sub_mod(b ? vk.a1 : vk.a0, acs[i]));
  }
  std::vector<const ZqMatrix*> parts;
  for (const ZqMatrix& blk : blocks) parts.push_back(&blk);
  return hconcat(parts);
}

void check_bit(int b) {
  if (b != 0 && b != 1) throw Error(Errc::invalid_argument, "b must be 0 or 1");
}

}  // namespace

ZqMatrix derive_F(const PublicParams& pp, const Ring& ring, const std::vector<std::uint8_t>& mu, int b) {
  check_bit(b);
  return assemble_F(ring, prf_matrices(pp, ring, mu), b);
}

bool in_kernel(const ZqMatrix& f, const std::vector<std::int64_t>& x) {
  if (x.size() != f.cols()) return false;
  const std::uint64_t q = f.modulus();
  std::vector<std::uint64_t> xr(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xr[i] = reduce(x[i], q);
  for (std::size_t r = 0; r < f.rows(); ++r) {
    const std::uint64_t* row = f.row(r);
    unsigned __int128 acc = 0;
    for (std::size_t c = 0; c < f.cols(); ++c) acc += static_cast<unsigned __int128>(row[c]) * xr[c];
    if (acc % q != 0) return false;
  }
  return true;
}

// ---- sign / verify ----

namespace {

IntMatrix to_column(const std::vector<std::int64_t>& x) { return IntMatrix::column(x); }

Signature finish(const Ring& ring, std::size_t m, const IntMatrix& x) {
  Signature sig;
  sig.n_ring = ring.size();
  sig.m = m;
  sig.x = x.to_int64();
  return sig;
}

// basis_rand over the extended basis, then the sampler over its output.
Signature sign_with_basis(const PublicParams& pp, const Ring& ring, const ZqMatrix& f, const IntMatrix& s_ext,
                          RandomTape& tape) {
  const GaussConfig cfg = pp.gauss();
  const KleinSampler ks(s_ext);
  const IntMatrix s_f = basis_rand(f, ks, pp.sigma, tape, cfg);
  const KleinSampler kf(s_f);
  const ZqVector zero(f.rows(), f.modulus());
  return finish(ring, pp.m, sample_gaussian(f, kf, zero, pp.sigma_prime, tape, cfg));
}

}  // namespace

Signature sign(const PublicParams& pp, const std::vector<std::uint8_t>& mu, const Ring& ring, const SigningKey& sk,
               RandomTape& tape) {
  check_ring(pp, ring);
  const std::size_t signer = locate_signer(ring, sk);
  if (sk.prf_key.size() != pp.k) throw Error(Errc::length_mismatch, "PRF key length");
  const int b = prf_eval(pp.prf, sk.prf_key, mu);
  const ZqMatrix f = derive_F(pp, ring, mu, 1 - b);
  const IntMatrix s_ext = basis_ext(f, signer * 2 * pp.m, pp.m, sk.s);
  return sign_with_basis(pp, ring, f, s_ext, tape);
}

const char* verify_code_name(VerifyCode c) {
  switch (c) {
    case VerifyCode::accept: return "Accept";
    case VerifyCode::bad_length: return "BadLength";
    case VerifyCode::norm_exceeded: return "NormExceeded";
    case VerifyCode::zero_vector: return "ZeroVector";
    case VerifyCode::ring_equation: return "RingEquation";
    case VerifyCode::bad_ring: return "BadRing";
    case VerifyCode::bad_message: return "BadMessage";
  }
  return "Unknown";
}

VerifyCode verify(const PublicParams& pp, const std::vector<std::uint8_t>& mu, const Ring& ring,
                  const Signature& sig) {
  try {
    check_ring(pp, ring);
  } catch (const Error&) {
    return VerifyCode::bad_ring;
  }
  if (mu.size() != pp.t) return VerifyCode::bad_message;
  for (std::uint8_t bit : mu) {
    if (bit > 1) return VerifyCode::bad_message;
  }
  const std::size_t len = 2 * ring.size() * pp.m;
  if (sig.n_ring != ring.size() || sig.m != pp.m || sig.x.size() != len) return VerifyCode::bad_length;
  mpz_class norm_sq = 0;
  bool zero = true;
  for (std::int64_t v : sig.x) {
    if (v != 0) zero = false;
    mpz_class e(static_cast<long>(v));
    norm_sq += e * e;
  }
  if (zero) return VerifyCode::zero_vector;
  mpq_class bound(pp.sigma_prime);
  bound = bound * bound * static_cast<unsigned long>(len);
  if (mpq_class(norm_sq) > bound) return VerifyCode::norm_exceeded;
  const std::vector<ZqMatrix> acs = prf_matrices(pp, ring, mu);
  for (int b = 0; b < 2; ++b) {
    if (in_kernel(assemble_F(ring, acs, b), sig.x)) return VerifyCode::accept;
  }
  return VerifyCode::ring_equation;
}

std::vector<std::uint64_t> explain_sign(const PublicParams& pp, const std::vector<std::uint8_t>& mu, const Ring& ring,
                                        const Signature& sig, const SigningKey& sk_other, RandomTape& fresh) {
  const VerifyCode code = verify(pp, mu, ring, sig);
  if (code != VerifyCode::accept) {
    throw Error(Errc::invalid_argument, std::string("signature does not verify: ") + verify_code_name(code));
  }
  const std::size_t member = locate_signer(ring, sk_other);
  if (sk_other.prf_key.size() != pp.k) throw Error(Errc::length_mismatch, "PRF key length");
  const int b = prf_eval(pp.prf, sk_other.prf_key, mu);
  const ZqMatrix f = derive_F(pp, ring, mu, 1 - b);
  if (!in_kernel(f, sig.x)) {
    throw Error(Errc::prf_bit_mismatch, "member's PRF bit selects a ring equation the signature does not satisfy");
  }
  const GaussConfig cfg = pp.gauss();
  const IntMatrix s_ext = basis_ext(f, member * 2 * pp.m, pp.m, sk_other.s);
  const KleinSampler ks(s_ext);
  const std::uint64_t start = fresh.cursor();
  const IntMatrix s_f = basis_rand(f, ks, pp.sigma, fresh, cfg);
  std::vector<std::uint64_t> words = fresh.words(start, fresh.cursor() - start);
  const KleinSampler kf(s_f);
  const ZqVector zero(f.rows(), f.modulus());
  const std::vector<std::uint64_t> tail =
      explain_gaussian(f, kf, to_column(sig.x), pp.sigma_prime, zero, fresh, cfg);
  words.insert(words.end(), tail.begin(), tail.end());
  return words;
}

Signature sign_simulated(const PublicParams& pp, const std::vector<std::uint8_t>& mu, const Ring& ring,
                         std::size_t signer, const SimSecrets& sim, const std::vector<std::uint8_t>& shared_key,
                         RandomTape& tape, SimSignInfo* info) {
  check_ring(pp, ring);
  if (signer >= ring.size()) throw Error(Errc::signer_not_in_ring, "signer index outside the ring");
  if (mu.size() != pp.t) throw Error(Errc::length_mismatch, "message length");
  if (sim.r_b.size() != pp.k) throw Error(Errc::dimension_mismatch, "simulation secrets");
  const std::uint64_t q = pp.q64();
  const int b = prf_eval(pp.prf, shared_key, mu);
  const ZqMatrix f = derive_F(pp, ring, mu, 1 - b);
  const VerificationKey& vk = ring.members[signer];

  std::vector<IntMatrix> rs(sim.r_b);
  std::vector<std::uint8_t> bits(shared_key);
  for (std::uint8_t bit : mu) {
    rs.push_back(bit ? sim.r_c1 : sim.r_c0);
    bits.push_back(bit);
  }
  const TrackResult tr = eval_track(pp.prf.circuit, vk.a, rs, bits);
  if (tr.b != b) throw Error(Errc::prf_bit_mismatch, "tracked circuit bit differs from the PRF");
  const IntMatrix r_bar = (b ? sim.r_a0 : sim.r_a1) - tr.r;

  // F^(s) = [A | A R_bar + (1 - 2b) G].
  const GadgetPair gp = gadget(pp.n, q, pp.m);
  const ZqMatrix g_signed = b ? sub_mod(ZqMatrix(pp.n, pp.m, q), gp.g) : gp.g;
  const IntMatrix s_abb = basis_ext_abb(vk.a, g_signed, r_bar, gp.s_g);
  if (info) {
    long double worst = 0;
    for (long double v : gs_norms_sq_approx(s_abb)) worst = std::max(worst, v);
    info->abb_gs_norm = std::sqrt(worst);
    info->r_bar_col_norm = std::sqrt(detail::to_ld(r_bar.max_col_norm_sq()));
    info->r_bar_frobenius = std::sqrt(detail::to_ld(r_bar.frobenius_sq()));
  }
  const IntMatrix s_ext = basis_ext(f, signer * 2 * pp.m, 2 * pp.m, s_abb);
  return sign_with_basis(pp, ring, f, s_ext, tape);
}

long double signature_norm(const Signature& sig) {
  long double s = 0;
  for (std::int64_t v : sig.x) s += static_cast<long double>(v) * static_cast<long double>(v);
  return std::sqrt(s);
}

}  // namespace lrs
