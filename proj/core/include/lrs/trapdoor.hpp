#pragma once

#include <cstddef>
#include <cstdint>

#include "lrs/gauss.hpp"
#include "lrs/tape.hpp"
#include "lrs/zq.hpp"

namespace lrs {

struct TrapdoorPair {
  ZqMatrix a;
  IntMatrix s;
};

// G = [I_n (x) (1, 2, ..., 2^(k-1)) | 0] and a basis of its kernel lattice.
struct GadgetPair {
  ZqMatrix g;
  IntMatrix s_g;
  std::size_t n = 0;
  std::size_t k = 0;  // bits per row
  std::size_t width() const { return n * k; }
};

std::size_t gadget_bits(std::uint64_t q);

GadgetPair gadget(std::size_t n, std::uint64_t q, std::size_t m);
ZqMatrix gadget_matrix(std::size_t n, std::uint64_t q, std::size_t m);

// Binary decomposition: G * g_inverse(M) = M (mod q), m rows, padding rows zero.
IntMatrix g_inverse(const ZqMatrix& mat, std::size_t m);

struct TrapGenConfig {
  // gs_norm(S) must not exceed sqrt(5) * (1 + c * (sqrt(m - w) + sqrt(w))).
  long double quality_const = 1.0L;
  int max_attempts = 64;
};

long double trap_gen_bound(std::size_t n, std::size_t m, std::uint64_t q, const TrapGenConfig& cfg = {});

// A = [Abar | G - Abar R]. Tape order: Abar row-major (one word per entry),
// then R row-major ((word mod 3) - 1), repeated on retry.
TrapdoorPair trap_gen(std::size_t n, std::size_t m, std::uint64_t q, RandomTape& tape,
                      const TrapGenConfig& cfg = {});

// Basis of the kernel lattice of A' = [A1 | A2 | A3] from a basis S2 for the
// block A2 = A'[:, start, start + len). Columns of S2 come first, then one
// column per outside index. Gram-Schmidt norms of the extra columns are 1.
IntMatrix basis_ext(const ZqMatrix& a_prime, std::size_t start, std::size_t len, const IntMatrix& s2);

// Canonical q-ary basis of the kernel lattice of A: q e_p for every pivot
// column p of rref(A), then e_j - sum_i U(i, j) e_{p_i} for every free column
// j, with U reduced into (-q/2, q/2]. Its Gram-Schmidt norm is exactly q.
IntMatrix canonical_basis(const ZqMatrix& a);

struct BasisRandStats {
  std::size_t draws = 0;
  long double first_norm = 0;  // |v_1|
};

// Draws Klein samples over S' until m' are linearly independent (at most
// 4 m' draws) and returns the canonical basis of the same lattice.
IntMatrix basis_rand(const ZqMatrix& a_prime, const IntMatrix& s_prime, long double sigma, RandomTape& tape,
                     const GaussConfig& cfg = {}, BasisRandStats* stats = nullptr);
IntMatrix basis_rand(const ZqMatrix& a_prime, const KleinSampler& ks, long double sigma, RandomTape& tape,
                     const GaussConfig& cfg = {}, BasisRandStats* stats = nullptr);

// Basis of the kernel lattice of F = [A | A R + B] from a basis S_B of B.
// Columns (-R s; s) for s in S_B first, then (e_i - R w_i; w_i), B w_i = -a_i.
IntMatrix basis_ext_abb(const ZqMatrix& a, const ZqMatrix& b, const IntMatrix& r, const IntMatrix& s_b);
ZqMatrix abb_matrix(const ZqMatrix& a, const ZqMatrix& b, const IntMatrix& r);

}  // namespace lrs
