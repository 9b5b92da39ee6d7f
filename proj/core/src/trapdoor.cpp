#include "lrs/trapdoor.hpp"

#include <cmath>
#include <string>

#include "detail.hpp"

namespace lrs {

namespace {

std::int64_t centered(std::uint64_t v, std::uint64_t q) {
  return v > q / 2 ? static_cast<std::int64_t>(v) - static_cast<std::int64_t>(q) : static_cast<std::int64_t>(v);
}

void require_spanning(const ZqMatrix& b, const char* what) {
  if (rank_mod(b) < b.rows()) throw Error(Errc::block_not_spanning, std::string(what) + " lacks full row rank");
}

void require_kernel(const ZqMatrix& b, const IntMatrix& s, const char* what) {
  if (s.rows() != b.cols() || s.cols() != b.cols()) throw Error(Errc::dimension_mismatch, std::string(what) + " shape");
  if (!mat_mul_mod(b, s).is_zero()) throw Error(Errc::bad_trapdoor, std::string(what) + " is not a kernel basis");
}

ZqMatrix negate(const ZqMatrix& a) {
  ZqMatrix out(a.rows(), a.cols(), a.modulus());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const std::uint64_t v = a(r, c);
      out.set(r, c, v == 0 ? 0 : a.modulus() - v);
    }
  }
  return out;
}

// Short solution w of B w = -a_j (mod q), entries in (-q/2, q/2].
IntMatrix short_solution(const ZqMatrix& b, const ZqMatrix& a, std::size_t j) {
  const std::uint64_t q = b.modulus();
  ZqVector y(b.rows(), q);
  for (std::size_t r = 0; r < b.rows(); ++r) {
    const std::uint64_t v = a(r, j);
    y.set(r, v == 0 ? 0 : q - v);
  }
  IntMatrix w = solve_particular(b, y);
  for (std::size_t r = 0; r < w.rows(); ++r) w(r, 0) = static_cast<long>(centered(w(r, 0).get_ui(), q));
  return w;
}

}  // namespace

std::size_t gadget_bits(std::uint64_t q) {
  std::size_t k = 0;
  while ((q >> k) != 0) ++k;
  return k;
}

ZqMatrix gadget_matrix(std::size_t n, std::uint64_t q, std::size_t m) {
  const std::size_t k = gadget_bits(q);
  if (m < n * k) throw Error(Errc::dimension_too_small, "m below gadget width");
  ZqMatrix g(n, m, q);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < k; ++b) g.set(i, i * k + b, (std::uint64_t{1} << b) % q);
  }
  return g;
}

GadgetPair gadget(std::size_t n, std::uint64_t q, std::size_t m) {
  check_modulus(q);
  GadgetPair gp;
  gp.g = gadget_matrix(n, q, m);
  gp.n = n;
  gp.k = gadget_bits(q);
  const std::size_t k = gp.k;
  IntMatrix s(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t o = i * k;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      s(o + j, o + j) = 2;
      s(o + j + 1, o + j) = -1;
    }
    for (std::size_t b = 0; b < k; ++b) s(o + b, o + k - 1) = static_cast<long>((q >> b) & 1);
  }
  for (std::size_t c = n * k; c < m; ++c) s(c, c) = 1;
  gp.s_g = std::move(s);
  return gp;
}

IntMatrix g_inverse(const ZqMatrix& mat, std::size_t m) {
  const std::uint64_t q = mat.modulus();
  const std::size_t k = gadget_bits(q);
  const std::size_t n = mat.rows();
  if (m < n * k) throw Error(Errc::dimension_too_small, "m below gadget width");
  IntMatrix out(m, mat.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < mat.cols(); ++c) {
      const std::uint64_t v = mat(i, c);
      for (std::size_t b = 0; b < k; ++b) {
        if ((v >> b) & 1) out(i * k + b, c) = 1;
      }
    }
  }
  return out;
}

long double trap_gen_bound(std::size_t n, std::size_t m, std::uint64_t q, const TrapGenConfig& cfg) {
  const std::size_t w = n * gadget_bits(q);
  const long double mbar = m > w ? static_cast<long double>(m - w) : 0.0L;
  return std::sqrt(5.0L) * (1.0L + cfg.quality_const * (std::sqrt(mbar) + std::sqrt(static_cast<long double>(w))));
}

TrapdoorPair trap_gen(std::size_t n, std::size_t m, std::uint64_t q, RandomTape& tape, const TrapGenConfig& cfg) {
  check_modulus(q);
  if (n == 0) throw Error(Errc::dimension_too_small, "n must be positive");
  const std::size_t k = gadget_bits(q);
  const std::size_t w = n * k;
  if (m < 2 * w) {
    throw Error(Errc::dimension_too_small, "m = " + std::to_string(m) + " below 2 n ceil(log2 q) = " + std::to_string(2 * w));
  }
  const std::size_t mbar = m - w;
  const long double bound = trap_gen_bound(n, m, q, cfg);
  const GadgetPair gw = gadget(n, q, w);

  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    ZqMatrix abar(n, mbar, q);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < mbar; ++c) abar.set(r, c, tape.next() % q);
    }
    IntMatrix rm(mbar, w);
    for (std::size_t r = 0; r < mbar; ++r) {
      for (std::size_t c = 0; c < w; ++c) rm(r, c) = static_cast<long>(tape.next() % 3) - 1;
    }

    ZqMatrix right = sub_mod(gw.g, mat_mul_mod(abar, rm));
    ZqMatrix a = hconcat({&abar, &right});

    const IntMatrix wm = g_inverse(negate(abar), w);
    const IntMatrix rs = rm * gw.s_g;
    const IntMatrix rw = rm * wm;
    IntMatrix s(m, m);
    for (std::size_t r = 0; r < mbar; ++r) {
      for (std::size_t c = 0; c < w; ++c) s(r, c) = rs(r, c);
      for (std::size_t c = 0; c < mbar; ++c) s(r, w + c) = rw(r, c) + (r == c ? 1 : 0);
    }
    for (std::size_t r = 0; r < w; ++r) {
      for (std::size_t c = 0; c < w; ++c) s(mbar + r, c) = gw.s_g(r, c);
      for (std::size_t c = 0; c < mbar; ++c) s(mbar + r, w + c) = wm(r, c);
    }

    long double worst = 0;
    for (long double v : gs_norms_sq_approx(s)) worst = std::max(worst, v);
    if (std::sqrt(worst) <= bound) return TrapdoorPair{std::move(a), std::move(s)};
  }
  throw Error(Errc::rank_failure, "no trapdoor within the quality bound after " + std::to_string(cfg.max_attempts) + " attempts");
}

IntMatrix basis_ext(const ZqMatrix& a_prime, std::size_t start, std::size_t len, const IntMatrix& s2) {
  const std::size_t m = a_prime.cols();
  if (start + len > m || len == 0) throw Error(Errc::dimension_mismatch, "block outside A'");
  const ZqMatrix a2 = a_prime.columns(start, len);
  require_kernel(a2, s2, "S2");
  require_spanning(a2, "block A2");
  IntMatrix out(m, m);
  for (std::size_t c = 0; c < len; ++c) {
    for (std::size_t r = 0; r < len; ++r) out(start + r, c) = s2(r, c);
  }
  std::size_t col = len;
  for (std::size_t j = 0; j < m; ++j) {
    if (j >= start && j < start + len) continue;
    const IntMatrix w = short_solution(a2, a_prime, j);
    out(j, col) = 1;
    for (std::size_t r = 0; r < len; ++r) out(start + r, col) = w(r, 0);
    ++col;
  }
  return out;
}

IntMatrix canonical_basis(const ZqMatrix& a) {
  const std::uint64_t q = a.modulus();
  const std::size_t m = a.cols();
  const detail::Rref e = detail::rref(a);
  const std::size_t rank = e.pivots.size();
  std::vector<bool> is_pivot(m, false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  IntMatrix out(m, m);
  std::size_t col = 0;
  for (std::size_t p : e.pivots) out(p, col++) = static_cast<long>(q);
  for (std::size_t j = 0; j < m; ++j) {
    if (is_pivot[j]) continue;
    out(j, col) = 1;
    for (std::size_t i = 0; i < rank; ++i) {
      const std::uint64_t u = e.r(i, j);
      if (u != 0) out(e.pivots[i], col) = static_cast<long>(-centered(u, q));
    }
    ++col;
  }
  return out;
}

IntMatrix basis_rand(const ZqMatrix& a_prime, const KleinSampler& ks, long double sigma, RandomTape& tape,
                     const GaussConfig& cfg, BasisRandStats* stats) {
  const std::size_t m = a_prime.cols();
  if (ks.dim() != m) throw Error(Errc::dimension_mismatch, "basis dimension differs from A'");
  const long double need = ks.gs_norm() * omega(m, cfg.omega_const);
  if (sigma < need) {
    throw Error(Errc::sigma_too_small, "sigma " + std::to_string(static_cast<double>(sigma)) + " below " +
                                           std::to_string(static_cast<double>(need)));
  }
  const std::vector<long double> zero(m, 0.0L);
  detail::IncrementalEchelon ech(m, detail::kCheckPrime);
  std::size_t draws = 0;
  long double first_sq = -1;
  while (ech.rank() < m) {
    if (draws == 4 * m) throw Error(Errc::independence_timeout, "fewer than m' independent samples in 4 m' draws");
    ++draws;
    const std::vector<std::int64_t> v = ks.combine(ks.sample(zero, sigma, tape, cfg));
    if (ech.add(v) && first_sq < 0) {
      first_sq = 0;
      for (std::int64_t x : v) first_sq += static_cast<long double>(x) * static_cast<long double>(x);
    }
  }
  if (stats) {
    stats->draws = draws;
    stats->first_norm = std::sqrt(first_sq);
  }
  IntMatrix out = canonical_basis(a_prime);
  if (rank_mod(a_prime) > 0) {
    // The canonical basis has Gram-Schmidt norm q; the sampled set has at
    // least |v_1|.
    const long double q = static_cast<long double>(a_prime.modulus());
    if (q * q > first_sq || q > sigma * std::sqrt(static_cast<long double>(m))) {
      throw Error(Errc::sigma_too_small, "sampled vectors shorter than q; canonical basis would be longer");
    }
  }
  return out;
}

IntMatrix basis_rand(const ZqMatrix& a_prime, const IntMatrix& s_prime, long double sigma, RandomTape& tape,
                     const GaussConfig& cfg, BasisRandStats* stats) {
  check_trapdoor(a_prime, s_prime);
  KleinSampler ks(s_prime);
  return basis_rand(a_prime, ks, sigma, tape, cfg, stats);
}

ZqMatrix abb_matrix(const ZqMatrix& a, const ZqMatrix& b, const IntMatrix& r) {
  if (r.rows() != a.cols() || r.cols() != b.cols() || a.rows() != b.rows()) {
    throw Error(Errc::dimension_mismatch, "F = [A | A R + B] shapes");
  }
  const ZqMatrix right = add_mod(mat_mul_mod(a, r), b);
  return hconcat({&a, &right});
}

IntMatrix basis_ext_abb(const ZqMatrix& a, const ZqMatrix& b, const IntMatrix& r, const IntMatrix& s_b) {
  if (r.rows() != a.cols() || r.cols() != b.cols() || a.rows() != b.rows()) {
    throw Error(Errc::dimension_mismatch, "F = [A | A R + B] shapes");
  }
  require_kernel(b, s_b, "S_B");
  require_spanning(b, "B");
  require_spanning(a, "A");
  const std::size_t ma = a.cols();
  const std::size_t mb = b.cols();
  IntMatrix out(ma + mb, ma + mb);
  const IntMatrix rs = r * s_b;
  for (std::size_t c = 0; c < mb; ++c) {
    for (std::size_t i = 0; i < ma; ++i) out(i, c) = -rs(i, c);
    for (std::size_t i = 0; i < mb; ++i) out(ma + i, c) = s_b(i, c);
  }
  for (std::size_t j = 0; j < ma; ++j) {
    const IntMatrix w = short_solution(b, a, j);
    const IntMatrix rw = r * w;
    const std::size_t c = mb + j;
    for (std::size_t i = 0; i < ma; ++i) out(i, c) = -rw(i, 0);
    out(j, c) += 1;
    for (std::size_t i = 0; i < mb; ++i) out(ma + i, c) = w(i, 0);
  }
  return out;
}

}  // namespace lrs
