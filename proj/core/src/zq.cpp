#include "lrs/zq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail.hpp"

namespace lrs {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::linearly_dependent: return "LinearlyDependent";
    case Errc::invalid_modulus: return "InvalidModulus";
    case Errc::out_of_support: return "OutOfSupport";
    case Errc::bad_trapdoor: return "BadTrapdoor";
    case Errc::sigma_too_small: return "SigmaTooSmall";
    case Errc::not_in_coset: return "NotInCoset";
    case Errc::tail_exceeded: return "TailExceeded";
    case Errc::dimension_too_small: return "DimensionTooSmall";
    case Errc::rank_failure: return "RankFailure";
    case Errc::block_not_spanning: return "BlockNotSpanning";
    case Errc::independence_timeout: return "IndependenceTimeout";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::unsatisfiable_params: return "UnsatisfiableParams";
    case Errc::signer_not_in_ring: return "SignerNotInRing";
    case Errc::prf_bit_mismatch: return "PrfBitMismatch";
    case Errc::tape_exhausted: return "TapeExhausted";
    case Errc::bad_format: return "BadFormat";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::overflow: return "Overflow";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t q) {
  if (q < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (q % p == 0) return q == p;
  }
  std::uint64_t d = q - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit inputs.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::pow_mod(a, d, q);
    if (x == 1 || x == q - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mul_mod(x, x, q);
      if (x == q - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

void check_modulus(std::uint64_t q) {
  if (q < 3 || q >= (1ULL << 31) || !is_prime(q)) {
    throw Error(Errc::invalid_modulus, "modulus must be an odd prime below 2^31, got " + std::to_string(q));
  }
}

std::uint64_t reduce(const mpz_class& v, std::uint64_t q) {
  return mpz_fdiv_ui(v.get_mpz_t(), q);
}

std::uint64_t reduce(std::int64_t v, std::uint64_t q) {
  std::int64_t r = v % static_cast<std::int64_t>(q);
  if (r < 0) r += static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(r);
}

// ---- ZqMatrix ----

ZqMatrix::ZqMatrix(std::size_t rows, std::size_t cols, std::uint64_t q)
    : rows_(rows), cols_(cols), q_(q), data_(rows * cols, 0) {
  check_modulus(q);
}

ZqMatrix ZqMatrix::identity(std::size_t n, std::uint64_t q) {
  ZqMatrix m(n, n, q);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

void ZqMatrix::set(std::size_t r, std::size_t c, std::uint64_t v) {
  if (v >= q_) throw Error(Errc::invalid_argument, "entry not reduced mod q");
  data_[r * cols_ + c] = v;
}

void ZqMatrix::set_signed(std::size_t r, std::size_t c, std::int64_t v) {
  data_[r * cols_ + c] = reduce(v, q_);
}

ZqMatrix ZqMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw Error(Errc::dimension_mismatch, "column range out of bounds");
  ZqMatrix out(rows_, count, q_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::copy(row(r) + first, row(r) + first + count, out.row(r));
  }
  return out;
}

bool ZqMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint64_t v) { return v == 0; });
}

// ---- ZqVector ----

ZqVector::ZqVector(std::size_t len, std::uint64_t q) : q_(q), v_(len, 0) { check_modulus(q); }

ZqVector::ZqVector(std::vector<std::uint64_t> entries, std::uint64_t q) : q_(q), v_(std::move(entries)) {
  check_modulus(q);
  for (auto e : v_) {
    if (e >= q) throw Error(Errc::invalid_argument, "entry not reduced mod q");
  }
}

void ZqVector::set(std::size_t i, std::uint64_t v) {
  if (v >= q_) throw Error(Errc::invalid_argument, "entry not reduced mod q");
  v_[i] = v;
}

bool ZqVector::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](std::uint64_t v) { return v == 0; });
}

// ---- IntMatrix ----

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::column(const std::vector<std::int64_t>& v) {
  IntMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = static_cast<long>(v[i]);
  return m;
}

IntMatrix IntMatrix::col(std::size_t c) const {
  IntMatrix out(rows_, 1);
  for (std::size_t r = 0; r < rows_; ++r) out(r, 0) = (*this)(r, c);
  return out;
}

void IntMatrix::set_col(std::size_t c, const IntMatrix& v) {
  if (v.rows() != rows_ || v.cols() != 1) throw Error(Errc::dimension_mismatch, "set_col shape");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v(r, 0);
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const mpz_class& v) { return v == 0; });
}

mpz_class IntMatrix::max_col_norm_sq() const {
  mpz_class best = 0;
  for (std::size_t c = 0; c < cols_; ++c) {
    mpz_class s = 0;
    for (std::size_t r = 0; r < rows_; ++r) s += (*this)(r, c) * (*this)(r, c);
    if (s > best) best = s;
  }
  return best;
}

mpz_class IntMatrix::frobenius_sq() const {
  mpz_class s = 0;
  for (const auto& v : data_) s += v * v;
  return s;
}

bool IntMatrix::fits_int64() const {
  return std::all_of(data_.begin(), data_.end(), [](const mpz_class& v) { return v.fits_slong_p(); });
}

std::vector<std::int64_t> IntMatrix::to_int64() const {
  std::vector<std::int64_t> out(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!data_[i].fits_slong_p()) throw Error(Errc::overflow, "entry exceeds 64 bits");
    out[i] = data_[i].get_si();
  }
  return out;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::dimension_mismatch, "integer product inner dimension");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const mpz_class& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b(k, j) != 0) mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), b(k, j).get_mpz_t());
      }
    }
  }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(Errc::dimension_mismatch, "sum shape");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(Errc::dimension_mismatch, "difference shape");
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

// ---- modular products ----

ZqMatrix mat_mul_mod(const ZqMatrix& a, const ZqMatrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::dimension_mismatch, "inner dimensions differ");
  if (a.modulus() != b.modulus()) throw Error(Errc::dimension_mismatch, "moduli differ");
  const std::uint64_t q = a.modulus();
  ZqMatrix c(a.rows(), b.cols(), q);
  std::vector<unsigned __int128> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    const std::uint64_t* ar = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::uint64_t aik = ar[k];
      if (aik == 0) continue;
      const std::uint64_t* br = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) acc[j] += static_cast<std::uint64_t>(aik * br[j]);
    }
    std::uint64_t* cr = c.row(i);
    for (std::size_t j = 0; j < b.cols(); ++j) cr[j] = static_cast<std::uint64_t>(acc[j] % q);
  }
  return c;
}

ZqMatrix mat_mul_mod(const ZqMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::dimension_mismatch, "inner dimensions differ");
  const std::uint64_t q = a.modulus();
  ZqMatrix br(b.rows(), b.cols(), q);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) br.set(r, c, reduce(b(r, c), q));
  return mat_mul_mod(a, br);
}

ZqVector mat_vec_mod(const ZqMatrix& a, const IntMatrix& x) {
  if (x.cols() != 1) throw Error(Errc::dimension_mismatch, "expected a column vector");
  ZqMatrix p = mat_mul_mod(a, x);
  std::vector<std::uint64_t> v(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) v[i] = p(i, 0);
  return ZqVector(std::move(v), a.modulus());
}

ZqMatrix add_mod(const ZqMatrix& a, const ZqMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.modulus() != b.modulus())
    throw Error(Errc::dimension_mismatch, "add_mod shape");
  ZqMatrix c(a.rows(), a.cols(), a.modulus());
  const std::uint64_t q = a.modulus();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.row(i)[j] = (a(i, j) + b(i, j)) % q;
  return c;
}

ZqMatrix sub_mod(const ZqMatrix& a, const ZqMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.modulus() != b.modulus())
    throw Error(Errc::dimension_mismatch, "sub_mod shape");
  ZqMatrix c(a.rows(), a.cols(), a.modulus());
  const std::uint64_t q = a.modulus();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c.row(i)[j] = (a(i, j) + q - b(i, j)) % q;
  return c;
}

ZqMatrix hconcat(const std::vector<const ZqMatrix*>& parts) {
  if (parts.empty()) throw Error(Errc::dimension_mismatch, "nothing to concatenate");
  const std::size_t rows = parts[0]->rows();
  const std::uint64_t q = parts[0]->modulus();
  std::size_t cols = 0;
  for (auto* p : parts) {
    if (p->rows() != rows || p->modulus() != q) throw Error(Errc::dimension_mismatch, "hconcat shape");
    cols += p->cols();
  }
  ZqMatrix out(rows, cols, q);
  std::size_t off = 0;
  for (auto* p : parts) {
    for (std::size_t r = 0; r < rows; ++r) std::copy(p->row(r), p->row(r) + p->cols(), out.row(r) + off);
    off += p->cols();
  }
  return out;
}

std::size_t rank_mod(const ZqMatrix& a) { return detail::rref(a).pivots.size(); }

IntMatrix solve_particular(const ZqMatrix& a, const ZqVector& y) {
  if (y.size() != a.rows()) throw Error(Errc::dimension_mismatch, "syndrome length");
  if (y.modulus() != a.modulus()) throw Error(Errc::dimension_mismatch, "moduli differ");
  const std::uint64_t q = a.modulus();
  ZqMatrix aug(a.rows(), a.cols() + 1, q);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::copy(a.row(r), a.row(r) + a.cols(), aug.row(r));
    aug.row(r)[a.cols()] = y[r];
  }
  // Pivot only on the coefficient columns.
  detail::Rref red = detail::rref(a);
  if (red.pivots.size() < a.rows()) throw Error(Errc::rank_deficient, "rows of A do not span Z_q^n");
  detail::Rref full = detail::rref(aug);
  IntMatrix x(a.cols(), 1);
  for (std::size_t i = 0; i < full.pivots.size(); ++i) {
    x(full.pivots[i], 0) = static_cast<unsigned long>(full.r(i, a.cols()));
  }
  return x;
}

// ---- Gram-Schmidt ----

GramSchmidt gram_schmidt(const IntMatrix& b, GsMode mode) {
  const std::size_t d = b.rows(), k = b.cols();
  GramSchmidt g;
  g.mode = mode;
  g.dim = d;
  g.count = k;
  g.bt_approx.assign(d * k, 0.0L);
  g.mu_approx.assign(k * k, 0.0L);
  g.norms_sq.assign(k, 0.0L);
  if (mode == GsMode::exact) {
    g.bt = RationalMatrix(d, k);
    g.mu = RationalMatrix(k, k);
    g.norms_sq_exact.assign(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t r = 0; r < d; ++r) g.bt(r, i) = b(r, i);
      for (std::size_t j = 0; j < i; ++j) {
        mpq_class dot = 0;
        for (std::size_t r = 0; r < d; ++r) dot += mpq_class(b(r, i)) * g.bt(r, j);
        mpq_class mu = dot / g.norms_sq_exact[j];
        g.mu(i, j) = mu;
        if (mu == 0) continue;
        for (std::size_t r = 0; r < d; ++r) g.bt(r, i) -= mu * g.bt(r, j);
      }
      mpq_class n2 = 0;
      for (std::size_t r = 0; r < d; ++r) n2 += g.bt(r, i) * g.bt(r, i);
      if (n2 == 0) throw Error(Errc::linearly_dependent, "column " + std::to_string(i));
      g.norms_sq_exact[i] = n2;
      g.mu(i, i) = 1;
    }
    for (std::size_t i = 0; i < k; ++i) {
      g.norms_sq[i] = detail::to_ld(g.norms_sq_exact[i]);
      for (std::size_t r = 0; r < d; ++r) g.bt_approx[i * d + r] = detail::to_ld(g.bt(r, i));
      for (std::size_t j = 0; j <= i; ++j) g.mu_approx[i * k + j] = detail::to_ld(g.mu(i, j));
    }
    return g;
  }
  std::vector<long double> bl(d * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t r = 0; r < d; ++r) bl[i * d + r] = detail::to_ld(b(r, i));
  for (std::size_t i = 0; i < k; ++i) {
    long double* v = &g.bt_approx[i * d];
    const long double* bi = &bl[i * d];
    std::copy(bi, bi + d, v);
    for (std::size_t j = 0; j < i; ++j) {
      const long double* u = &g.bt_approx[j * d];
      long double dot = 0;
      for (std::size_t r = 0; r < d; ++r) dot += bi[r] * u[r];
      const long double mu = dot / g.norms_sq[j];
      g.mu_approx[i * k + j] = mu;
      for (std::size_t r = 0; r < d; ++r) v[r] -= mu * u[r];
    }
    long double n2 = 0;
    for (std::size_t r = 0; r < d; ++r) n2 += v[r] * v[r];
    if (!(n2 > 0)) throw Error(Errc::linearly_dependent, "column " + std::to_string(i));
    g.norms_sq[i] = n2;
    g.mu_approx[i * k + i] = 1;
  }
  return g;
}

std::vector<mpq_class> gs_norms_sq_exact(const IntMatrix& b) {
  const std::size_t d = b.rows(), k = b.cols();
  // Integer Gram matrix, then Bareiss elimination: the k-th pivot is the
  // leading principal minor D_k, and |b~_k|^2 = D_k / D_{k-1}.
  std::vector<mpz_class> g(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      mpz_class s = 0;
      for (std::size_t r = 0; r < d; ++r) {
        if (b(r, i) != 0 && b(r, j) != 0) mpz_addmul(s.get_mpz_t(), b(r, i).get_mpz_t(), b(r, j).get_mpz_t());
      }
      g[i * k + j] = s;
      g[j * k + i] = s;
    }
  }
  std::vector<mpq_class> out(k);
  mpz_class prev = 1;
  mpz_class tmp;
  for (std::size_t p = 0; p < k; ++p) {
    const mpz_class piv = g[p * k + p];
    if (piv == 0) throw Error(Errc::linearly_dependent, "column " + std::to_string(p));
    out[p] = mpq_class(piv, prev);
    out[p].canonicalize();
    for (std::size_t i = p + 1; i < k; ++i) {
      for (std::size_t j = p + 1; j < k; ++j) {
        mpz_class& gij = g[i * k + j];
        gij *= piv;
        mpz_submul(gij.get_mpz_t(), g[i * k + p].get_mpz_t(), g[p * k + j].get_mpz_t());
        mpz_divexact(gij.get_mpz_t(), gij.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = piv;
  }
  return out;
}

std::vector<long double> gs_norms_sq_approx(const IntMatrix& b) {
  return gram_schmidt(b, GsMode::approximate).norms_sq;
}

GsNorm gs_norm(const IntMatrix& b, GsMode mode) {
  GsNorm out;
  if (b.cols() == 0) {
    out.exact = mode == GsMode::exact;
    out.squared = 0;
    out.value = 0;
    return out;
  }
  if (mode == GsMode::exact) {
    auto norms = gs_norms_sq_exact(b);
    mpq_class best = norms[0];
    for (const auto& v : norms) {
      if (v > best) best = v;
    }
    out.exact = true;
    out.squared = best;
    out.value = std::sqrt(detail::to_ld(best));
    return out;
  }
  auto norms = gs_norms_sq_approx(b);
  long double best = *std::max_element(norms.begin(), norms.end());
  out.exact = false;
  out.value = std::sqrt(best);
  return out;
}

}  // namespace lrs
