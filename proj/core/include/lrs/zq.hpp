#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "lrs/error.hpp"

namespace lrs {

// Matrices over Z_q. The modulus must be an odd prime below 2^31 so that
// products of two residues fit in 64 bits.
class ZqMatrix {
 public:
  ZqMatrix() = default;
  ZqMatrix(std::size_t rows, std::size_t cols, std::uint64_t q);

  static ZqMatrix identity(std::size_t n, std::uint64_t q);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t modulus() const { return q_; }

  std::uint64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint64_t v);
  // Stores v mod q for any signed value.
  void set_signed(std::size_t r, std::size_t c, std::int64_t v);

  std::uint64_t* row(std::size_t r) { return data_.data() + r * cols_; }
  const std::uint64_t* row(std::size_t r) const { return data_.data() + r * cols_; }
  const std::vector<std::uint64_t>& data() const { return data_; }

  ZqMatrix columns(std::size_t first, std::size_t count) const;
  bool is_zero() const;

  bool operator==(const ZqMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && q_ == o.q_ && data_ == o.data_;
  }
  bool operator!=(const ZqMatrix& o) const { return !(*this == o); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> data_;
};

class ZqVector {
 public:
  ZqVector() = default;
  ZqVector(std::size_t len, std::uint64_t q);
  ZqVector(std::vector<std::uint64_t> entries, std::uint64_t q);

  std::size_t size() const { return v_.size(); }
  std::uint64_t modulus() const { return q_; }
  std::uint64_t operator[](std::size_t i) const { return v_[i]; }
  void set(std::size_t i, std::uint64_t v);
  const std::vector<std::uint64_t>& entries() const { return v_; }
  bool is_zero() const;

  bool operator==(const ZqVector& o) const { return q_ == o.q_ && v_ == o.v_; }

 private:
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> v_;
};

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  static IntMatrix column(const std::vector<std::int64_t>& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  mpz_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpz_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix col(std::size_t c) const;
  void set_col(std::size_t c, const IntMatrix& v);
  IntMatrix transpose() const;
  bool is_zero() const;
  // Max column l2 norm, squared.
  mpz_class max_col_norm_sq() const;
  // Squared Frobenius norm.
  mpz_class frobenius_sq() const;
  bool fits_int64() const;
  std::vector<std::int64_t> to_int64() const;

  bool operator==(const IntMatrix& o) const;
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpq_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpq_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpq_class> data_;
};

bool is_prime(std::uint64_t q);
void check_modulus(std::uint64_t q);

// Residue of an arbitrary integer in [0, q).
std::uint64_t reduce(const mpz_class& v, std::uint64_t q);
std::uint64_t reduce(std::int64_t v, std::uint64_t q);

ZqMatrix mat_mul_mod(const ZqMatrix& a, const ZqMatrix& b);
ZqMatrix mat_mul_mod(const ZqMatrix& a, const IntMatrix& b);
ZqVector mat_vec_mod(const ZqMatrix& a, const IntMatrix& x);
ZqMatrix add_mod(const ZqMatrix& a, const ZqMatrix& b);
ZqMatrix sub_mod(const ZqMatrix& a, const ZqMatrix& b);
ZqMatrix hconcat(const std::vector<const ZqMatrix*>& parts);

// Rank of a over Z_q.
std::size_t rank_mod(const ZqMatrix& a);

// x0 in [0, q)^m with a*x0 = y (mod q). Gauss-Jordan elimination with
// lowest-column-index pivoting; free variables are set to zero.
IntMatrix solve_particular(const ZqMatrix& a, const ZqVector& y);

enum class GsMode { exact, approximate };

struct GramSchmidt {
  GsMode mode = GsMode::exact;
  std::size_t dim = 0;   // rows
  std::size_t count = 0; // columns
  // Exact mode only: orthogonalized columns and coefficients mu(i, j), j < i.
  RationalMatrix bt;
  RationalMatrix mu;
  std::vector<mpq_class> norms_sq_exact;
  // Both modes: long double copies, column-major for bt.
  std::vector<long double> bt_approx;
  std::vector<long double> mu_approx;  // row-major count x count
  std::vector<long double> norms_sq;
};

GramSchmidt gram_schmidt(const IntMatrix& b, GsMode mode);

struct GsNorm {
  bool exact = false;
  mpq_class squared;   // exact mode
  long double value;   // both modes: max_i |b~_i|
};

GsNorm gs_norm(const IntMatrix& b, GsMode mode = GsMode::exact);

// Exact squared Gram-Schmidt norms via fraction-free elimination on the
// integer Gram matrix. Cheaper than gram_schmidt(exact) for large inputs.
std::vector<mpq_class> gs_norms_sq_exact(const IntMatrix& b);

// Long double Gram-Schmidt norms squared, classical algorithm.
std::vector<long double> gs_norms_sq_approx(const IntMatrix& b);

}  // namespace lrs
