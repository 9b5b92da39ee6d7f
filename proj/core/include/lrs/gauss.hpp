#pragma once

#include <cstdint>
#include <vector>

#include "lrs/tape.hpp"
#include "lrs/zq.hpp"

namespace lrs {

using u128 = unsigned __int128;

struct GaussConfig {
  long double tail_cut = 12.0L;
  long double omega_const = 3.0L;
};

// omega_const * sqrt(log2 m); zero for m < 2.
long double omega(std::size_t m, long double omega_const = 3.0L);

// Discrete Gaussian over Z with rho(x) = exp(-pi (x - c)^2 / sigma^2),
// restricted to [ceil(c - tau sigma), floor(c + tau sigma)].
//
// The CDF is a 64-bit fixed-point function: cdf(lo - 1) = 0,
// cdf(hi) = 2^64, strictly increasing in between. Small supports are
// tabulated exactly from the normalized masses (minimum weight 1, the
// rounding remainder goes to the mode). Large supports use the Gaussian
// integral over [z - 1/2, z + 1/2] with a first Euler-Maclaurin correction.
// Each tail is evaluated from its own side; points outside the core
// [core_lo, core_hi], where a point carries fewer than 2^10 units, get one
// extra unit each so that the CDF stays strictly increasing.
class Gauss1DTable {
 public:
  static constexpr std::int64_t kTableMax = 512;

  Gauss1DTable(long double sigma, long double center, long double tau = 12.0L);

  long double sigma() const { return sigma_; }
  long double center() const { return center_; }
  long double tau() const { return tau_; }
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  bool tabulated() const { return !cum_.empty(); }

  u128 cdf(std::int64_t z) const;
  // Unique z with cdf(z - 1) <= u < cdf(z).
  std::int64_t invert(std::uint64_t u) const;

 private:
  long double below(long double x) const;
  long double above(long double x) const;

  long double sigma_, center_, tau_;
  std::int64_t lo_ = 0, hi_ = 0;
  std::vector<u128> cum_;
  std::int64_t core_lo_ = 0, core_hi_ = 0;
  long double scale_ = 0;
};

std::int64_t dgauss1d_sample(const Gauss1DTable& t, RandomTape& tape);
// A word uniform in [cdf(z - 1), cdf(z)), drawn with one fresh tape word.
std::uint64_t dgauss1d_explain(const Gauss1DTable& t, std::int64_t z, RandomTape& tape);

// Klein's nearest-plane sampler over a fixed basis. Gram-Schmidt data is
// held in long double; the same code path computes centers for sampling and
// for explanation, so both see bit-identical 1-D tables.
class KleinSampler {
 public:
  explicit KleinSampler(const IntMatrix& basis);

  std::size_t dim() const { return dim_; }
  long double gs_norm() const { return gs_max_; }
  const IntMatrix& basis() const { return basis_; }

  // Coefficients z (basis order) of a lattice point drawn around center.
  // Consumes one word per coordinate, highest index first.
  std::vector<std::int64_t> sample(const std::vector<long double>& center, long double sigma, RandomTape& tape,
                                   const GaussConfig& cfg) const;
  // Words under which sample() returns z, in consumption order.
  std::vector<std::uint64_t> explain(const std::vector<long double>& center, const std::vector<std::int64_t>& z,
                                     long double sigma, RandomTape& fresh, const GaussConfig& cfg) const;

  // B z, exactly. Throws Overflow if an entry leaves int64.
  std::vector<std::int64_t> combine(const std::vector<std::int64_t>& z) const;
  // z with B z = v exactly; throws NotInCoset if v is not in the lattice.
  std::vector<std::int64_t> coefficients(const std::vector<std::int64_t>& v) const;

 private:
  std::vector<long double> projections(const std::vector<long double>& center) const;

  std::size_t dim_;
  IntMatrix basis_;
  std::vector<std::int64_t> b64_;  // column-major
  std::vector<long double> bt_;    // column-major Gram-Schmidt vectors
  std::vector<long double> mu_;    // row-major
  std::vector<long double> norms_sq_;
  long double gs_max_ = 0;
};

// Checks A S = 0 (mod q) and that S is nonsingular; throws BadTrapdoor.
void check_trapdoor(const ZqMatrix& a, const IntMatrix& s);

// x in the coset {x : A x = y (mod q)}, distributed as Klein's sampler over S
// centered at -x0 and shifted by x0 = solve_particular(A, y).
IntMatrix sample_gaussian(const ZqMatrix& a, const IntMatrix& s, const ZqVector& y, long double sigma,
                          RandomTape& tape, const GaussConfig& cfg = {});

// Words that make sample_gaussian return x. Fresh words are drawn from
// `fresh`, one per coordinate.
std::vector<std::uint64_t> explain_gaussian(const ZqMatrix& a, const IntMatrix& s, const IntMatrix& x,
                                            long double sigma, const ZqVector& y, RandomTape& fresh,
                                            const GaussConfig& cfg = {});

// Variants reusing a prepared sampler for S (no trapdoor re-validation).
IntMatrix sample_gaussian(const ZqMatrix& a, const KleinSampler& ks, const ZqVector& y, long double sigma,
                          RandomTape& tape, const GaussConfig& cfg = {});
std::vector<std::uint64_t> explain_gaussian(const ZqMatrix& a, const KleinSampler& ks, const IntMatrix& x,
                                            long double sigma, const ZqVector& y, RandomTape& fresh,
                                            const GaussConfig& cfg = {});

}  // namespace lrs
