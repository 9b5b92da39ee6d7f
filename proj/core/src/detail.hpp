#pragma once

#include <cstdint>
#include <vector>

#include "lrs/zq.hpp"

namespace lrs::detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t q);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t q);

// Reduced row echelon form over Z_q with lowest-column-index pivoting.
struct Rref {
  ZqMatrix r;                      // reduced matrix, zero rows at the bottom
  std::vector<std::size_t> pivots; // pivot column of row i
  std::vector<std::size_t> row_of; // original row index that became row i
};

Rref rref(const ZqMatrix& a);

// Incremental linear independence test over F_p for integer vectors.
class IncrementalEchelon {
 public:
  IncrementalEchelon(std::size_t dim, std::uint64_t p);
  // Adds v if independent of the stored vectors; returns whether it was.
  bool add(const std::vector<std::int64_t>& v);
  std::size_t rank() const { return rows_.size(); }

 private:
  std::size_t dim_;
  std::uint64_t p_;
  std::vector<std::vector<std::uint64_t>> rows_;  // normalized, pivot = 1
  std::vector<std::size_t> pivots_;
};

// Rank of an integer matrix modulo a word prime.
std::size_t rank_mod_p(const IntMatrix& a, std::uint64_t p);

constexpr std::uint64_t kCheckPrime = 2147483647ULL;  // 2^31 - 1

long double to_ld(const mpz_class& v);
long double to_ld(const mpq_class& v);

}  // namespace lrs::detail
