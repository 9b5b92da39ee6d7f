#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "lattice_util.hpp"
#include "lrs/error.hpp"
#include "lrs/gauss.hpp"
#include "lrs/trapdoor.hpp"
#include "stats.hpp"

using namespace lrs;
using test::gs_max_sq;
using test::is_kernel_basis;

namespace {

ZqMatrix random_zq(std::size_t r, std::size_t c, std::uint64_t q, std::mt19937_64& rng) {
  ZqMatrix a(r, c, q);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) a.set(i, j, rng() % q);
  }
  return a;
}

IntMatrix random_signs(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = (rng() & 1) ? 1 : -1;
  }
  return m;
}

TrapdoorPair toy(const std::string& id, std::size_t n = 2, std::size_t m = 25, std::uint64_t q = 17) {
  RandomTape t(seed_from_hex("7a"), id);
  return trap_gen(n, m, q, t);
}

template <typename F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::invalid_argument;
}

// gs^2 < (sqrt(a) + 1)^2 b, exactly, for rationals a, b, gs^2.
bool abb_bound_holds(const mpq_class& gs_sq, const mpq_class& r_sq, const mpq_class& sb_sq) {
  // (sqrt(a) + 1)^2 b = (a + 1) b + 2 b sqrt(a); compare L - (a + 1) b < 2 b sqrt(a).
  const mpq_class d = gs_sq - (r_sq + 1) * sb_sq;
  if (d < 0) return true;
  return d * d < 4 * r_sq * sb_sq * sb_sq;
}

}  // namespace

TEST(Gadget, SmallExample) {
  const GadgetPair g = gadget(1, 5, 3);
  EXPECT_EQ(gadget_bits(5), 3u);
  EXPECT_EQ(g.g(0, 0), 1u);
  EXPECT_EQ(g.g(0, 1), 2u);
  EXPECT_EQ(g.g(0, 2), 4u);
  const std::vector<std::vector<long>> cols{{2, -1, 0}, {0, 2, -1}, {1, 0, 1}};
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(g.s_g(i, j), cols[j][i]) << i << "," << j;
  }
  EXPECT_TRUE(mat_mul_mod(g.g, g.s_g).is_zero());
  EXPECT_TRUE(is_kernel_basis(g.g, g.s_g));
}

TEST(Gadget, PaddingColumns) {
  const GadgetPair g = gadget(1, 5, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(g.s_g(i, 3), i == 3 ? 1 : 0);
    EXPECT_EQ(g.s_g(i, 4), i == 4 ? 1 : 0);
  }
  EXPECT_EQ(g.g(0, 3), 0u);
  EXPECT_EQ(g.g(0, 4), 0u);
  EXPECT_TRUE(is_kernel_basis(g.g, g.s_g));
}

TEST(Gadget, GramSchmidtBound) {
  const GadgetPair g = gadget(2, 17, 12);
  EXPECT_TRUE(is_kernel_basis(g.g, g.s_g));
  EXPECT_LE(gs_max_sq(g.s_g), 5);
  // Hand elimination for one q = 17 block: 5, 21/5, 85/21, 341/85, 289/341.
  const std::vector<mpq_class> block = gs_norms_sq_exact(gadget(1, 17, 5).s_g);
  const std::vector<mpq_class> expect{mpq_class(5), mpq_class(21, 5), mpq_class(85, 21), mpq_class(341, 85),
                                      mpq_class(289, 341)};
  EXPECT_EQ(block, expect);
  for (std::uint64_t q : {3ull, 7ull, 257ull, 65537ull, 2147483647ull}) {
    const GadgetPair p = gadget(1, q, gadget_bits(q));
    EXPECT_TRUE(is_kernel_basis(p.g, p.s_g)) << q;
    EXPECT_LE(gs_max_sq(p.s_g), 5) << q;
  }
}

TEST(Gadget, TooSmall) {
  EXPECT_EQ(error_code([] { gadget(2, 17, 9); }), Errc::dimension_too_small);
}

TEST(GInverse, Examples) {
  ZqMatrix m(1, 1, 5);
  m.set(0, 0, 3);
  const IntMatrix bits = g_inverse(m, 3);
  EXPECT_EQ(bits, IntMatrix::column({1, 1, 0}));
  EXPECT_TRUE(g_inverse(ZqMatrix(2, 4, 17), 12).is_zero());
}

TEST(GInverse, IdentityReplay) {
  std::mt19937_64 rng(2);
  const ZqMatrix g = gadget_matrix(3, 17, 20);
  for (int t = 0; t < 20; ++t) {
    const ZqMatrix m = random_zq(3, 7, 17, rng);
    const IntMatrix x = g_inverse(m, 20);
    EXPECT_EQ(mat_mul_mod(g, x), m);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < x.cols(); ++j) {
        EXPECT_TRUE(x(i, j) == 0 || x(i, j) == 1);
        if (i >= 15) {
          EXPECT_EQ(x(i, j), 0);
        }
      }
    }
  }
}

TEST(TrapGen, InvariantsAndBoundOnFiftyInstances) {
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 1 + i % 3;
    const std::uint64_t q = (i % 2) ? 17 : 31;
    const std::size_t m = 2 * n * gadget_bits(q) + n * gadget_bits(q) + i % 4;
    const TrapdoorPair p = toy("inst" + std::to_string(i), n, m, q);
    ASSERT_TRUE(is_kernel_basis(p.a, p.s)) << i;
    const long double bound = trap_gen_bound(n, m, q);
    EXPECT_LE(gs_max_sq(p.s).get_d(), static_cast<double>(bound * bound)) << i;
    EXPECT_EQ(rank_mod(p.a), n);
  }
}

TEST(TrapGen, TapeReplayOracle) {
  // Rebuild Abar and R straight from the tape words and compare.
  const std::size_t n = 2, m = 25, k = gadget_bits(17), w = n * k, mbar = m - w;
  RandomTape t(seed_from_hex("7a"), "struct");
  const TrapdoorPair p = trap_gen(n, m, 17, t);
  ASSERT_EQ(t.cursor(), n * mbar + mbar * w) << "first attempt expected to pass";
  RandomTape w0(seed_from_hex("7a"), "struct");
  ZqMatrix abar(n, mbar, 17);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < mbar; ++j) abar.set(i, j, w0.next() % 17);
  }
  IntMatrix r(mbar, w);
  for (std::size_t i = 0; i < mbar; ++i) {
    for (std::size_t j = 0; j < w; ++j) r(i, j) = static_cast<long>(w0.next() % 3) - 1;
  }
  EXPECT_EQ(p.a.columns(0, mbar), abar);
  EXPECT_EQ(p.a.columns(mbar, w), sub_mod(gadget_matrix(n, 17, w), mat_mul_mod(abar, r)));
  const GadgetPair g = gadget(n, 17, w);
  const IntMatrix rsg = r * g.s_g;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      EXPECT_EQ(p.s(i, j), i < mbar ? rsg(i, j) : g.s_g(i - mbar, j));
    }
  }
}

TEST(TrapGen, EntriesLookUniform) {
  std::vector<double> counts(17, 0);
  int total = 0;
  for (int i = 0; total < 10000; ++i) {
    const TrapdoorPair p = toy("u" + std::to_string(i));
    for (std::uint64_t v : p.a.data()) {
      counts[v] += 1;
      ++total;
    }
  }
  const std::vector<double> expected(17, total / 17.0);
  const test::Chi2 r = test::chi2_test(counts, expected);
  EXPECT_GT(r.p, 0.001) << r.stat;
}

TEST(TrapGen, DeterministicAndTooSmall) {
  EXPECT_EQ(toy("same").s, toy("same").s);
  EXPECT_EQ(toy("same").a, toy("same").a);
  RandomTape t(seed_from_hex("01"), "x");
  EXPECT_EQ(error_code([&] { trap_gen(2, 19, 17, t); }), Errc::dimension_too_small);
}

TEST(TrapGen, RankFailureWhenBoundUnreachable) {
  RandomTape t(seed_from_hex("01"), "x");
  TrapGenConfig cfg;
  cfg.quality_const = -1;
  cfg.max_attempts = 3;
  EXPECT_EQ(error_code([&] { trap_gen(2, 25, 17, t, cfg); }), Errc::rank_failure);
}

TEST(BasisExt, EmptyOuterBlocksKeepBasis) {
  const TrapdoorPair p = toy("ext0");
  EXPECT_EQ(basis_ext(p.a, 0, 25, p.s), p.s);
}

TEST(BasisExt, ThreeBlocksExactNormPreserved) {
  std::mt19937_64 rng(12);
  const TrapdoorPair p = toy("ext3");
  const ZqMatrix a1 = random_zq(2, 7, 17, rng), a3 = random_zq(2, 9, 17, rng);
  const ZqMatrix mid = hconcat({&a1, &p.a, &a3});
  const ZqMatrix first = hconcat({&p.a, &a1, &a3});
  const IntMatrix s_mid = basis_ext(mid, 7, 25, p.s);
  const IntMatrix s_first = basis_ext(first, 0, 25, p.s);
  EXPECT_TRUE(is_kernel_basis(mid, s_mid));
  EXPECT_TRUE(is_kernel_basis(first, s_first));
  EXPECT_EQ(gs_max_sq(s_mid), gs_max_sq(p.s));
  EXPECT_EQ(gs_max_sq(s_first), gs_max_sq(p.s));
  EXPECT_EQ(basis_ext(mid, 7, 25, p.s), s_mid);
}

TEST(BasisExt, Errors) {
  std::mt19937_64 rng(13);
  const TrapdoorPair p = toy("exterr");
  const ZqMatrix a1 = random_zq(2, 4, 17, rng);
  const ZqMatrix ap = hconcat({&a1, &p.a});
  IntMatrix bad = p.s;
  bad(3, 3) += 1;
  EXPECT_EQ(error_code([&] { basis_ext(ap, 4, 25, bad); }), Errc::bad_trapdoor);
  ZqMatrix zero(2, 25, 17);
  const ZqMatrix deg = hconcat({&a1, &zero});
  EXPECT_EQ(error_code([&] { basis_ext(deg, 4, 25, IntMatrix::identity(25)); }), Errc::block_not_spanning);
}

TEST(CanonicalBasis, NormIsExactlyQ) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 10; ++t) {
    const ZqMatrix a = random_zq(2 + t % 2, 12, 17, rng);
    const IntMatrix s = canonical_basis(a);
    EXPECT_TRUE(is_kernel_basis(a, s));
    EXPECT_EQ(gs_max_sq(s), 17 * 17);
  }
}

TEST(BasisRand, InvariantsOnFiftyInstances) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 50; ++i) {
    const TrapdoorPair p = toy("rand" + std::to_string(i));
    const ZqMatrix extra = random_zq(2, 10, 17, rng);
    const ZqMatrix ap = hconcat({&p.a, &extra});
    const IntMatrix sp = basis_ext(ap, 0, 25, p.s);
    const KleinSampler ks(sp);
    const long double sigma = ks.gs_norm() * omega(35) * (1 + i % 3);
    RandomTape tape(seed_from_hex("b0"), "rand" + std::to_string(i));
    BasisRandStats stats;
    const IntMatrix out = basis_rand(ap, ks, sigma, tape, {}, &stats);
    ASSERT_TRUE(is_kernel_basis(ap, out)) << i;
    EXPECT_LE(gs_max_sq(out).get_d(), static_cast<double>(sigma * sigma * 35)) << i;
    EXPECT_GE(stats.draws, 35u);
    EXPECT_LE(stats.draws, 140u);
    EXPECT_EQ(tape.cursor(), stats.draws * 35);
  }
}

TEST(BasisRand, TapeDeterminismAndComposition) {
  const TrapdoorPair p = toy("det");
  const long double sigma = KleinSampler(p.s).gs_norm() * omega(25);
  RandomTape t1(seed_from_hex("c0"), "r"), t2(seed_from_hex("c0"), "r");
  const IntMatrix s1 = basis_rand(p.a, p.s, sigma, t1);
  EXPECT_EQ(basis_rand(p.a, p.s, sigma, t2), s1);
  // The output is a usable trapdoor.
  RandomTape t3(seed_from_hex("c1"), "s");
  const long double sigma2 = KleinSampler(s1).gs_norm() * omega(25);
  std::mt19937_64 rng(16);
  ZqVector y(2, 17);
  y.set(0, 3);
  y.set(1, 11);
  EXPECT_EQ(mat_vec_mod(p.a, sample_gaussian(p.a, s1, y, sigma2, t3)), y);
}

TEST(BasisRand, SigmaTooSmall) {
  const TrapdoorPair p = toy("small");
  RandomTape t(seed_from_hex("c2"), "r");
  EXPECT_EQ(error_code([&] { basis_rand(p.a, p.s, 1.0L, t); }), Errc::sigma_too_small);
}

TEST(BasisRand, IndependentOfInputBasis) {
  // Two bases of one lattice: the first drawn vector has the same law, and
  // the returned basis is a function of the lattice alone.
  const TrapdoorPair p = toy("indist");
  const IntMatrix s1 = canonical_basis(p.a);
  const KleinSampler k0(p.s), k1(s1);
  const long double sigma = std::max(k0.gs_norm(), k1.gs_norm()) * omega(25);
  RandomTape ta(seed_from_hex("d0"), "a"), tb(seed_from_hex("d1"), "b");
  EXPECT_EQ(basis_rand(p.a, k0, sigma, ta), basis_rand(p.a, k1, sigma, tb));

  const ZqVector zero(2, 17);
  const int trials = 10000, bins = 24;
  const long double width = sigma / 4;
  std::vector<double> ca(bins, 0), cb(bins, 0);
  auto bin = [&](const IntMatrix& x) {
    const long double v = x(0, 0).get_d() / width + bins / 2.0L;
    return static_cast<std::size_t>(std::clamp<long double>(std::floor(v), 0, bins - 1));
  };
  for (int i = 0; i < trials; ++i) {
    ca[bin(sample_gaussian(p.a, k0, zero, sigma, ta))] += 1;
    cb[bin(sample_gaussian(p.a, k1, zero, sigma, tb))] += 1;
  }
  const test::Chi2 r = test::chi2_two_sample(ca, cb);
  EXPECT_GT(r.p, 0.001) << r.stat << " dof " << r.dof;
}

TEST(BasisExtAbb, ZeroR) {
  const TrapdoorPair p = toy("abb0");
  const GadgetPair g = gadget(2, 17, 25);
  const IntMatrix r(25, 25);
  const IntMatrix sf = basis_ext_abb(p.a, g.g, r, g.s_g);
  const ZqMatrix f = abb_matrix(p.a, g.g, r);
  EXPECT_EQ(f, hconcat({&p.a, &g.g}));
  EXPECT_TRUE(is_kernel_basis(f, sf));
  // With R = 0 the extra columns project to unit vectors: equality, not strict.
  EXPECT_EQ(gs_max_sq(sf), gs_max_sq(g.s_g));
}

TEST(BasisExtAbb, SignMatrixBound) {
  std::mt19937_64 rng(17);
  const GadgetPair g = gadget(2, 17, 25);
  for (int i = 0; i < 5; ++i) {
    const TrapdoorPair p = toy("abb" + std::to_string(i));
    const IntMatrix r = random_signs(25, 25, rng);
    const IntMatrix sf = basis_ext_abb(p.a, g.g, r, g.s_g);
    const ZqMatrix f = abb_matrix(p.a, g.g, r);
    ASSERT_TRUE(is_kernel_basis(f, sf));
    EXPECT_TRUE(abb_bound_holds(gs_max_sq(sf), mpq_class(r.max_col_norm_sq()), gs_max_sq(g.s_g)));
  }
}

TEST(BasisExtAbb, Errors) {
  const TrapdoorPair p = toy("abberr");
  const GadgetPair g = gadget(2, 17, 25);
  const IntMatrix r(25, 25);
  IntMatrix bad = g.s_g;
  bad(0, 0) += 1;
  EXPECT_EQ(error_code([&] { basis_ext_abb(p.a, g.g, r, bad); }), Errc::bad_trapdoor);
  EXPECT_EQ(error_code([&] { basis_ext_abb(p.a, ZqMatrix(2, 25, 17), r, IntMatrix::identity(25)); }),
            Errc::block_not_spanning);
}
