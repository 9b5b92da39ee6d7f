#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lrs/gauss.hpp"
#include "lrs/prf.hpp"
#include "lrs/tape.hpp"
#include "lrs/trapdoor.hpp"
#include "lrs/zq.hpp"

namespace lrs {

enum class Preset { toy, paper_asymptotic };

const char* preset_name(Preset p);
Preset parse_preset(const std::string& s);

struct SetupOptions {
  std::size_t n = 4;
  Preset preset = Preset::toy;
  std::size_t k = 4;        // PRF key bits
  std::size_t t = 4;        // message bits
  std::size_t rounds = 2;   // toy PRF mixing layers
  std::size_t n_max = 5;    // largest supported ring
  double delta = 0.5;       // paper-asymptotic m = ceil(6 n^(1 + delta))
  double omega_const = 3.0;
  double tail_cut = 12.0;
};

struct PublicParams {
  std::size_t n = 0, m = 0, k = 0, t = 0;
  mpz_class q;
  double sigma = 0, sigma_prime = 0;
  double omega_const = 3.0;
  double tail_cut = 12.0;
  PrfSpec prf;
  Preset preset = Preset::toy;
  bool toy = true;
  Digest setup_digest{};
  std::size_t n_max = 5;
  double delta = 0.5;

  // Only toy parameters fit the word-sized modular arithmetic.
  bool executable() const;
  std::uint64_t q64() const;
  GaussConfig gauss() const;
};

PublicParams setup(const SetupOptions& opt, const RandomTape& tape);

// Checks the parameter relations; returns a list of violations.
std::vector<std::string> check_params(const PublicParams& pp);

struct VerificationKey {
  ZqMatrix a, a0, a1, c0, c1;
  std::vector<ZqMatrix> b;  // k matrices
  Digest fingerprint{};
};

struct SigningKey {
  IntMatrix s;
  std::vector<std::uint8_t> prf_key;
  Digest vk_fingerprint{};
};

struct Ring {
  std::vector<VerificationKey> members;
  std::size_t size() const { return members.size(); }
};

struct Signature {
  std::size_t n_ring = 0;
  std::size_t m = 0;
  std::vector<std::int64_t> x;  // length 2 N m
};

struct KeyPair {
  VerificationKey vk;
  SigningKey sk;
};

// Tape order: trap_gen, k key bits (low bit of one word each), then A0, A1,
// C0, C1, B1..Bk row-major with one word per entry.
KeyPair keygen(const PublicParams& pp, RandomTape& tape);

// Simulation-form keys: A from trap_gen and every other matrix A R + bit G
// with R in {-1, 1}^(m x m) and a PRF key shared by the whole ring.
struct SimSecrets {
  IntMatrix r_a0, r_a1, r_c0, r_c1;
  std::vector<IntMatrix> r_b;
};

struct SimKeyPair {
  VerificationKey vk;
  SigningKey sk;  // carries the shared PRF key
  SimSecrets sim;
};

// Tape order: trap_gen, then R_A0, R_A1, R_C0, R_C1, R_B1..R_Bk row-major
// (sign from the low bit of one word per entry).
SimKeyPair keygen_simulated(const PublicParams& pp, const std::vector<std::uint8_t>& shared_key, RandomTape& tape);

Digest vk_fingerprint(const PublicParams& pp, const VerificationKey& vk);

void check_ring(const PublicParams& pp, const Ring& ring);
std::size_t locate_signer(const Ring& ring, const SigningKey& sk);

// A_{C,mu}^(i) for one member.
ZqMatrix eval_prf_matrix(const PublicParams& pp, const VerificationKey& vk, const std::vector<std::uint8_t>& mu);

// F'_b = [F^(1) | ... | F^(N)], F^(i) = [A^(i) | A_b^(i) - A_{C,mu}^(i)].
ZqMatrix derive_F(const PublicParams& pp, const Ring& ring, const std::vector<std::uint8_t>& mu, int b);

// Tape order: basis_rand words, then one sampler word per coordinate.
Signature sign(const PublicParams& pp, const std::vector<std::uint8_t>& mu, const Ring& ring, const SigningKey& sk,
               RandomTape& tape);

enum class VerifyCode { accept, bad_length, norm_exceeded, zero_vector, ring_equation, bad_ring, bad_message };

const char* verify_code_name(VerifyCode c);

VerifyCode verify(const PublicParams& pp, const std::vector<std::uint8_t>& mu, const Ring& ring,
                  const Signature& sig);

// True if F x = 0 (mod q) for a signature vector.
bool in_kernel(const ZqMatrix& f, const std::vector<std::int64_t>& x);

// Words under which sign(pp, mu, ring, sk_other) returns sig: the basis_rand
// words drawn fresh from `fresh`, then the explained sampler words.
std::vector<std::uint64_t> explain_sign(const PublicParams& pp, const std::vector<std::uint8_t>& mu, const Ring& ring,
                                        const Signature& sig, const SigningKey& sk_other, RandomTape& fresh);

struct SimSignInfo {
  long double abb_gs_norm = 0;   // Gram-Schmidt norm of the basis_ext_abb output
  long double r_bar_col_norm = 0;
  long double r_bar_frobenius = 0;
};

// Signs for member `signer` using only the gadget trapdoor and the tracked
// R matrices of a simulation-form ring.
Signature sign_simulated(const PublicParams& pp, const std::vector<std::uint8_t>& mu, const Ring& ring,
                         std::size_t signer, const SimSecrets& sim, const std::vector<std::uint8_t>& shared_key,
                         RandomTape& tape, SimSignInfo* info = nullptr);

long double signature_norm(const Signature& sig);

// ---- serialization ----
std::vector<std::uint8_t> serialize_params(const PublicParams& pp);
PublicParams parse_params(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> serialize_vk(const PublicParams& pp, const VerificationKey& vk);
VerificationKey parse_vk(const PublicParams& pp, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> serialize_sk(const SigningKey& sk);
SigningKey parse_sk(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> serialize_ring(const PublicParams& pp, const Ring& ring);
Ring parse_ring(const PublicParams& pp, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> serialize_signature(const Signature& sig);
Signature parse_signature(const std::vector<std::uint8_t>& bytes);

}  // namespace lrs
