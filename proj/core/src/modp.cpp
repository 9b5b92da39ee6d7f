#include "detail.hpp"

#include <cmath>

namespace lrs::detail {

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t q) {
  std::uint64_t r = 1 % q;
  a %= q;
  while (e) {
    if (e & 1) r = mul_mod(r, a, q);
    a = mul_mod(a, a, q);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t q) {
  // q is prime.
  return pow_mod(a, q - 2, q);
}

Rref rref(const ZqMatrix& a) {
  const std::uint64_t q = a.modulus();
  Rref out{a, {}, {}};
  ZqMatrix& m = out.r;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> order(rows);
  for (std::size_t i = 0; i < rows; ++i) order[i] = i;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (m(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != r) {
      std::swap_ranges(m.row(piv), m.row(piv) + cols, m.row(r));
      std::swap(order[piv], order[r]);
    }
    const std::uint64_t inv = inv_mod(m(r, c), q);
    std::uint64_t* pr = m.row(r);
    for (std::size_t j = c; j < cols; ++j) pr[j] = mul_mod(pr[j], inv, q);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      std::uint64_t f = m(i, c);
      if (f == 0) continue;
      std::uint64_t* pi = m.row(i);
      for (std::size_t j = c; j < cols; ++j) {
        pi[j] = (pi[j] + q - mul_mod(f, pr[j], q)) % q;
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.row_of.assign(order.begin(), order.begin() + r);
  return out;
}

IncrementalEchelon::IncrementalEchelon(std::size_t dim, std::uint64_t p) : dim_(dim), p_(p) {}

bool IncrementalEchelon::add(const std::vector<std::int64_t>& v) {
  std::vector<std::uint64_t> w(dim_);
  for (std::size_t i = 0; i < dim_; ++i) w[i] = reduce(v[i], p_);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::size_t c = pivots_[k];
    const std::uint64_t f = w[c];
    if (f == 0) continue;
    const auto& row = rows_[k];
    for (std::size_t j = c; j < dim_; ++j) {
      if (row[j]) w[j] = (w[j] + p_ - mul_mod(f, row[j], p_)) % p_;
    }
  }
  std::size_t c = 0;
  while (c < dim_ && w[c] == 0) ++c;
  if (c == dim_) return false;
  const std::uint64_t inv = inv_mod(w[c], p_);
  for (std::size_t j = c; j < dim_; ++j) w[j] = mul_mod(w[j], inv, p_);
  rows_.push_back(std::move(w));
  pivots_.push_back(c);
  return true;
}

std::size_t rank_mod_p(const IntMatrix& a, std::uint64_t p) {
  IncrementalEchelon e(a.rows(), p);
  std::vector<std::int64_t> tmp(a.rows());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
      tmp[r] = static_cast<std::int64_t>(reduce(a(r, c), p));
    }
    e.add(tmp);
  }
  return e.rank();
}

namespace {

// v ~ top * 2^shift with |top| < 2^63.
void split(const mpz_class& v, std::int64_t& top, long& shift) {
  const long bits = static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2));
  if (bits <= 62) {
    top = v.get_si();
    shift = 0;
    return;
  }
  mpz_class t;
  mpz_tdiv_q_2exp(t.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(bits - 62));
  top = t.get_si();
  shift = bits - 62;
}

}  // namespace

long double to_ld(const mpz_class& v) {
  std::int64_t top;
  long shift;
  split(v, top, shift);
  return std::ldexp(static_cast<long double>(top), static_cast<int>(shift));
}

long double to_ld(const mpq_class& v) {
  std::int64_t tn, td;
  long sn, sd;
  split(v.get_num(), tn, sn);
  split(v.get_den(), td, sd);
  return std::ldexp(static_cast<long double>(tn) / static_cast<long double>(td),
                    static_cast<int>(sn - sd));
}

}  // namespace lrs::detail
