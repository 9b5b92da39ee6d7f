#include "lrs/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail.hpp"

namespace lrs {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kTwo64 = 18446744073709551616.0L;
const u128 kFullMass = static_cast<u128>(1) << 64;

// Acklam's rational approximation to the standard normal quantile, with one
// Halley step. Used only as a starting point for the exact inversion search.
long double inv_norm_cdf(long double p) {
  static const long double a[] = {-3.969683028665376e+01L, 2.209460984245205e+02L, -2.759285104469687e+02L,
                                  1.383577518672690e+02L, -3.066479806614716e+01L, 2.506628277459239e+00L};
  static const long double b[] = {-5.447609879822406e+01L, 1.615858368580409e+02L, -1.556989798598866e+02L,
                                  6.680131188771972e+01L, -1.328068155288572e+01L};
  static const long double c[] = {-7.784894002430293e-03L, -3.223964580411365e-01L, -2.400758277161838e+00L,
                                  -2.549732539343734e+00L, 4.374664141464968e+00L, 2.938163982698783e+00L};
  static const long double d[] = {7.784695709041462e-03L, 3.224671290700398e-01L, 2.445134137142996e+00L,
                                  3.754408661907416e+00L};
  const long double plow = 0.02425L;
  long double x;
  if (p < plow) {
    long double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p > 1 - plow) {
    long double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else {
    long double q = p - 0.5L;
    long double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  }
  long double e = 0.5L * std::erfc(-x / std::sqrt(2.0L)) - p;
  long double u = e * std::sqrt(2 * kPi) * std::exp(x * x / 2);
  x = x - u / (1 + x * u / 2);
  return x;
}

}  // namespace

long double omega(std::size_t m, long double omega_const) {
  if (m < 2) return 0.0L;
  return omega_const * std::sqrt(std::log2(static_cast<long double>(m)));
}

// ---- 1-D ----

Gauss1DTable::Gauss1DTable(long double sigma, long double center, long double tau)
    : sigma_(sigma), center_(center), tau_(tau) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw Error(Errc::invalid_argument, "sigma must be positive");
  if (!(tau > 0) || !std::isfinite(tau)) throw Error(Errc::invalid_argument, "tail cut must be positive");
  if (!std::isfinite(center)) throw Error(Errc::invalid_argument, "center must be finite");
  const long double lo = std::ceil(center - tau * sigma);
  const long double hi = std::floor(center + tau * sigma);
  if (!(std::fabs(lo) < 1.0e18L) || !(std::fabs(hi) < 1.0e18L) || hi - lo > 1.0e17L) {
    throw Error(Errc::invalid_argument, "support too large for 64-bit inversion");
  }
  lo_ = static_cast<std::int64_t>(lo);
  hi_ = static_cast<std::int64_t>(hi);
  const std::int64_t nearest = std::llround(center);
  lo_ = std::min(lo_, nearest);
  hi_ = std::max(hi_, nearest);
  const std::int64_t width = hi_ - lo_ + 1;

  if (width <= kTableMax) {
    std::vector<long double> p(static_cast<std::size_t>(width));
    long double total = 0;
    for (std::int64_t i = 0; i < width; ++i) {
      const long double x = static_cast<long double>(lo_ + i) - center_;
      p[i] = std::exp(-kPi * x * x / (sigma_ * sigma_));
      total += p[i];
    }
    std::vector<__int128> w(p.size());
    __int128 sum = 0;
    std::size_t mode = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      long double scaled = std::floor(p[i] / total * kTwo64);
      __int128 wi = scaled >= kTwo64 ? static_cast<__int128>(kFullMass) : static_cast<__int128>(static_cast<u128>(scaled));
      if (wi < 1) wi = 1;
      w[i] = wi;
      sum += wi;
      if (p[i] > p[mode]) mode = i;
    }
    w[mode] += static_cast<__int128>(kFullMass) - sum;
    if (w[mode] < 1) throw Error(Errc::invalid_argument, "degenerate Gaussian table");
    cum_.resize(p.size());
    u128 acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += static_cast<u128>(w[i]);
      cum_[i] = acc;
    }
    return;
  }
  // Core: points whose mass is at least 2^10 units, |z - c| <= sigma sqrt(ln(2^54 / sigma) / pi).
  const long double ln_ratio = 54 * std::log(2.0L) - std::log(sigma_);
  if (!(ln_ratio > 0)) throw Error(Errc::invalid_argument, "support too large for 64-bit inversion");
  const long double half = sigma_ * std::sqrt(ln_ratio / kPi);
  core_lo_ = std::max(lo_, static_cast<std::int64_t>(std::ceil(center_ - half)));
  core_hi_ = std::min(hi_, static_cast<std::int64_t>(std::floor(center_ + half)));
  if (core_lo_ > nearest || core_hi_ < nearest) throw Error(Errc::invalid_argument, "degenerate Gaussian core");
  scale_ = kTwo64 - static_cast<long double>(core_lo_ - lo_) - static_cast<long double>(hi_ - core_hi_);
}

// Mass of (-inf, x] and [x, inf) relative to sigma, each accurate on its own side of the center.
long double Gauss1DTable::below(long double x) const {
  const long double d = x - center_;
  const long double y = std::sqrt(kPi) * d / sigma_;
  const long double corr = kPi * d / (12.0L * sigma_ * sigma_) * std::exp(-y * y);
  return std::clamp(0.5L * std::erfc(-y) + corr / sigma_, 0.0L, 1.0L);
}

long double Gauss1DTable::above(long double x) const {
  const long double d = x - center_;
  const long double y = std::sqrt(kPi) * d / sigma_;
  const long double corr = kPi * d / (12.0L * sigma_ * sigma_) * std::exp(-y * y);
  return std::clamp(0.5L * std::erfc(y) - corr / sigma_, 0.0L, 1.0L);
}

u128 Gauss1DTable::cdf(std::int64_t z) const {
  if (z < lo_) return 0;
  if (z >= hi_) return kFullMass;
  if (!cum_.empty()) return cum_[static_cast<std::size_t>(z - lo_)];
  const long double x = static_cast<long double>(z) + 0.5L;
  if (z < core_lo_) return static_cast<u128>(std::floor(scale_ * below(x))) + static_cast<u128>(z - lo_ + 1);
  if (z > core_hi_) {
    return kFullMass - static_cast<u128>(std::floor(scale_ * above(x))) - static_cast<u128>(hi_ - z);
  }
  const u128 left_units = static_cast<u128>(core_lo_ - lo_);
  if (x <= center_) return static_cast<u128>(std::floor(scale_ * below(x))) + left_units;
  return static_cast<u128>(std::floor(scale_ * (1.0L - above(x)))) + left_units;
}

std::int64_t Gauss1DTable::invert(std::uint64_t u) const {
  const u128 uu = u;
  if (!cum_.empty()) {
    auto it = std::upper_bound(cum_.begin(), cum_.end(), uu);
    return lo_ + static_cast<std::int64_t>(it - cum_.begin());
  }
  // Smallest z in [lo, hi] with cdf(z) > u, galloping from a quantile guess.
  auto above = [&](std::int64_t z) { return cdf(z) > uu; };
  const long double t = (static_cast<long double>(u) + 0.5L) / kTwo64;
  const long double s = sigma_ / std::sqrt(2 * kPi);
  long double guess = center_ + s * inv_norm_cdf(t);
  if (!std::isfinite(guess)) guess = center_;
  std::int64_t z0 = std::llround(std::clamp(guess, static_cast<long double>(lo_), static_cast<long double>(hi_)));
  std::int64_t bad, good;  // above(bad) false, above(good) true
  if (above(z0)) {
    good = z0;
    std::int64_t step = 1;
    for (;;) {
      std::int64_t cand = z0 - step;
      if (cand < lo_) {
        bad = lo_ - 1;
        break;
      }
      if (!above(cand)) {
        bad = cand;
        break;
      }
      good = cand;
      step *= 2;
    }
  } else {
    bad = z0;
    std::int64_t step = 1;
    for (;;) {
      std::int64_t cand = z0 + step;
      if (cand >= hi_) {
        good = hi_;
        break;
      }
      if (above(cand)) {
        good = cand;
        break;
      }
      bad = cand;
      step *= 2;
    }
  }
  while (good - bad > 1) {
    std::int64_t mid = bad + (good - bad) / 2;
    if (above(mid)) good = mid;
    else bad = mid;
  }
  return good;
}

std::int64_t dgauss1d_sample(const Gauss1DTable& t, RandomTape& tape) { return t.invert(tape.next()); }

std::uint64_t dgauss1d_explain(const Gauss1DTable& t, std::int64_t z, RandomTape& tape) {
  if (z < t.lo() || z > t.hi()) throw Error(Errc::out_of_support, "z = " + std::to_string(z) + " beyond tail cut");
  const u128 lo = t.cdf(z - 1);
  const u128 width = t.cdf(z) - lo;
  const u128 word = tape.next();
  const u128 off = (word * width) >> 64;
  return static_cast<std::uint64_t>(lo + off);
}

// ---- Klein ----

KleinSampler::KleinSampler(const IntMatrix& basis) : dim_(basis.rows()), basis_(basis) {
  if (basis.rows() != basis.cols()) throw Error(Errc::dimension_mismatch, "basis must be square");
  const std::size_t m = dim_;
  b64_.resize(m * m);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t r = 0; r < m; ++r) {
      const mpz_class& v = basis(r, c);
      if (!v.fits_slong_p()) throw Error(Errc::overflow, "basis entry exceeds 64 bits");
      b64_[c * m + r] = v.get_si();
    }
  }
  bt_.assign(m * m, 0.0L);
  mu_.assign(m * m, 0.0L);
  norms_sq_.assign(m, 0.0L);
  for (std::size_t i = 0; i < m; ++i) {
    long double* v = &bt_[i * m];
    for (std::size_t r = 0; r < m; ++r) v[r] = static_cast<long double>(b64_[i * m + r]);
    for (std::size_t j = 0; j < i; ++j) {
      const long double* u = &bt_[j * m];
      long double dot = 0;
      for (std::size_t r = 0; r < m; ++r) dot += static_cast<long double>(b64_[i * m + r]) * u[r];
      const long double mu = dot / norms_sq_[j];
      mu_[i * m + j] = mu;
      if (mu == 0) continue;
      for (std::size_t r = 0; r < m; ++r) v[r] -= mu * u[r];
    }
    long double n2 = 0;
    for (std::size_t r = 0; r < m; ++r) n2 += v[r] * v[r];
    if (!(n2 > 0)) throw Error(Errc::bad_trapdoor, "basis is singular");
    norms_sq_[i] = n2;
    gs_max_ = std::max(gs_max_, std::sqrt(n2));
  }
}

std::vector<long double> KleinSampler::projections(const std::vector<long double>& center) const {
  if (center.size() != dim_) throw Error(Errc::dimension_mismatch, "center length");
  std::vector<long double> d(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const long double* u = &bt_[j * dim_];
    long double dot = 0;
    for (std::size_t r = 0; r < dim_; ++r) dot += center[r] * u[r];
    d[j] = dot / norms_sq_[j];
  }
  return d;
}

std::vector<std::int64_t> KleinSampler::sample(const std::vector<long double>& center, long double sigma,
                                               RandomTape& tape, const GaussConfig& cfg) const {
  std::vector<long double> d = projections(center);
  std::vector<std::int64_t> z(dim_);
  for (std::size_t k = dim_; k-- > 0;) {
    Gauss1DTable t(sigma / std::sqrt(norms_sq_[k]), d[k], cfg.tail_cut);
    const std::int64_t zk = dgauss1d_sample(t, tape);
    z[k] = zk;
    if (zk == 0) continue;
    const long double zl = static_cast<long double>(zk);
    const long double* mu = &mu_[k * dim_];
    for (std::size_t j = 0; j < k; ++j) d[j] -= zl * mu[j];
  }
  return z;
}

std::vector<std::uint64_t> KleinSampler::explain(const std::vector<long double>& center,
                                                 const std::vector<std::int64_t>& z, long double sigma,
                                                 RandomTape& fresh, const GaussConfig& cfg) const {
  if (z.size() != dim_) throw Error(Errc::dimension_mismatch, "coefficient length");
  std::vector<long double> d = projections(center);
  std::vector<std::uint64_t> words;
  words.reserve(dim_);
  for (std::size_t k = dim_; k-- > 0;) {
    Gauss1DTable t(sigma / std::sqrt(norms_sq_[k]), d[k], cfg.tail_cut);
    const std::int64_t zk = z[k];
    if (zk < t.lo() || zk > t.hi()) {
      throw Error(Errc::tail_exceeded, "coordinate " + std::to_string(k) + " outside its 1-D support");
    }
    words.push_back(dgauss1d_explain(t, zk, fresh));
    if (zk == 0) continue;
    const long double zl = static_cast<long double>(zk);
    const long double* mu = &mu_[k * dim_];
    for (std::size_t j = 0; j < k; ++j) d[j] -= zl * mu[j];
  }
  return words;
}

std::vector<std::int64_t> KleinSampler::combine(const std::vector<std::int64_t>& z) const {
  if (z.size() != dim_) throw Error(Errc::dimension_mismatch, "coefficient length");
  std::vector<__int128> acc(dim_, 0);
  for (std::size_t c = 0; c < dim_; ++c) {
    if (z[c] == 0) continue;
    const __int128 zc = z[c];
    const std::int64_t* col = &b64_[c * dim_];
    for (std::size_t r = 0; r < dim_; ++r) acc[r] += zc * col[r];
  }
  std::vector<std::int64_t> v(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    if (acc[r] > std::numeric_limits<std::int64_t>::max() || acc[r] < std::numeric_limits<std::int64_t>::min()) {
      throw Error(Errc::overflow, "lattice vector exceeds 64 bits");
    }
    v[r] = static_cast<std::int64_t>(acc[r]);
  }
  return v;
}

std::vector<std::int64_t> KleinSampler::coefficients(const std::vector<std::int64_t>& v) const {
  if (v.size() != dim_) throw Error(Errc::dimension_mismatch, "vector length");
  // Nearest-plane back substitution in long double, verified exactly.
  std::vector<long double> target(v.begin(), v.end());
  std::vector<long double> d = projections(target);
  std::vector<std::int64_t> z(dim_);
  bool ok = true;
  for (std::size_t k = dim_; k-- > 0;) {
    const long double r = std::nearbyint(d[k]);
    if (!(std::fabs(r) < 4.0e18L)) {
      ok = false;
      break;
    }
    z[k] = static_cast<std::int64_t>(r);
    const long double* mu = &mu_[k * dim_];
    for (std::size_t j = 0; j < k; ++j) d[j] -= r * mu[j];
  }
  if (ok) {
    try {
      if (combine(z) == v) return z;
    } catch (const Error&) {
    }
  }
  // Exact rational elimination on [B | v].
  const std::size_t m = dim_;
  std::vector<mpq_class> a(m * (m + 1));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) a[r * (m + 1) + c] = static_cast<long>(b64_[c * m + r]);
    a[r * (m + 1) + m] = static_cast<long>(v[r]);
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    while (piv < m && a[piv * (m + 1) + c] == 0) ++piv;
    if (piv == m) throw Error(Errc::bad_trapdoor, "basis is singular");
    if (piv != c) {
      for (std::size_t j = 0; j <= m; ++j) std::swap(a[piv * (m + 1) + j], a[c * (m + 1) + j]);
    }
    const mpq_class inv = 1 / a[c * (m + 1) + c];
    for (std::size_t j = c; j <= m; ++j) a[c * (m + 1) + j] *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const mpq_class f = a[r * (m + 1) + c];
      if (f == 0) continue;
      for (std::size_t j = c; j <= m; ++j) a[r * (m + 1) + j] -= f * a[c * (m + 1) + j];
    }
  }
  for (std::size_t r = 0; r < m; ++r) {
    const mpq_class& x = a[r * (m + 1) + m];
    if (x.get_den() != 1) throw Error(Errc::not_in_coset, "vector is not in the lattice spanned by the basis");
    if (!x.get_num().fits_slong_p()) throw Error(Errc::overflow, "coefficient exceeds 64 bits");
    z[r] = x.get_num().get_si();
  }
  return z;
}

// ---- lattice cosets ----

void check_trapdoor(const ZqMatrix& a, const IntMatrix& s) {
  if (s.rows() != a.cols() || s.cols() != a.cols()) throw Error(Errc::dimension_mismatch, "trapdoor shape");
  if (!mat_mul_mod(a, s).is_zero()) throw Error(Errc::bad_trapdoor, "A S != 0 (mod q)");
  if (detail::rank_mod_p(s, detail::kCheckPrime) < s.cols()) {
    // Singular modulo the check prime; confirm over the rationals.
    try {
      (void)gs_norms_sq_exact(s);
    } catch (const Error&) {
      throw Error(Errc::bad_trapdoor, "trapdoor is rank-deficient");
    }
  }
}

namespace {

std::vector<long double> negated_shift(const IntMatrix& x0) {
  std::vector<long double> c(x0.rows());
  for (std::size_t i = 0; i < x0.rows(); ++i) c[i] = -detail::to_ld(x0(i, 0));
  return c;
}

// The zero syndrome needs no elimination; this also admits A without full row rank.
IntMatrix coset_shift(const ZqMatrix& a, const ZqVector& y) {
  if (y.size() != a.rows()) throw Error(Errc::dimension_mismatch, "syndrome length");
  if (y.is_zero()) return IntMatrix(a.cols(), 1);
  return solve_particular(a, y);
}

void check_sigma(const KleinSampler& ks, long double sigma, const GaussConfig& cfg) {
  const long double need = ks.gs_norm() * omega(ks.dim(), cfg.omega_const);
  if (sigma < need) {
    throw Error(Errc::sigma_too_small, "sigma " + std::to_string(static_cast<double>(sigma)) + " below " +
                                           std::to_string(static_cast<double>(need)));
  }
}

}  // namespace

IntMatrix sample_gaussian(const ZqMatrix& a, const KleinSampler& ks, const ZqVector& y, long double sigma,
                          RandomTape& tape, const GaussConfig& cfg) {
  if (ks.dim() != a.cols()) throw Error(Errc::dimension_mismatch, "basis dimension differs from A");
  check_sigma(ks, sigma, cfg);
  const IntMatrix x0 = coset_shift(a, y);
  const std::vector<std::int64_t> z = ks.sample(negated_shift(x0), sigma, tape, cfg);
  const std::vector<std::int64_t> v = ks.combine(z);
  IntMatrix x(a.cols(), 1);
  for (std::size_t i = 0; i < a.cols(); ++i) x(i, 0) = x0(i, 0) + static_cast<long>(v[i]);
  return x;
}

IntMatrix sample_gaussian(const ZqMatrix& a, const IntMatrix& s, const ZqVector& y, long double sigma,
                          RandomTape& tape, const GaussConfig& cfg) {
  check_trapdoor(a, s);
  KleinSampler ks(s);
  return sample_gaussian(a, ks, y, sigma, tape, cfg);
}

std::vector<std::uint64_t> explain_gaussian(const ZqMatrix& a, const KleinSampler& ks, const IntMatrix& x,
                                            long double sigma, const ZqVector& y, RandomTape& fresh,
                                            const GaussConfig& cfg) {
  if (ks.dim() != a.cols() || x.rows() != a.cols() || x.cols() != 1) {
    throw Error(Errc::dimension_mismatch, "explain shapes");
  }
  if (!(mat_vec_mod(a, x) == y)) throw Error(Errc::not_in_coset, "A x != y (mod q)");
  const IntMatrix x0 = coset_shift(a, y);
  std::vector<std::int64_t> v(a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    mpz_class d = x(i, 0) - x0(i, 0);
    if (!d.fits_slong_p()) throw Error(Errc::tail_exceeded, "vector exceeds 64 bits");
    v[i] = d.get_si();
  }
  const std::vector<std::int64_t> z = ks.coefficients(v);
  return ks.explain(negated_shift(x0), z, sigma, fresh, cfg);
}

std::vector<std::uint64_t> explain_gaussian(const ZqMatrix& a, const IntMatrix& s, const IntMatrix& x,
                                            long double sigma, const ZqVector& y, RandomTape& fresh,
                                            const GaussConfig& cfg) {
  check_trapdoor(a, s);
  KleinSampler ks(s);
  return explain_gaussian(a, ks, x, sigma, y, fresh, cfg);
}

}  // namespace lrs
