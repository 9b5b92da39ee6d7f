#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "lrs/scheme.hpp"

using namespace lrs;

namespace {

PublicParams params(std::size_t n) {
  SetupOptions opt;
  opt.n = n;
  return setup(opt, RandomTape(seed_from_hex("be"), "setup"));
}

std::vector<KeyPair> keys(const PublicParams& pp, std::size_t count) {
  std::vector<KeyPair> out;
  for (std::size_t i = 0; i < count; ++i) {
    RandomTape t(seed_from_hex("be"), "key" + std::to_string(i));
    out.push_back(keygen(pp, t));
  }
  return out;
}

Ring ring_of(const std::vector<KeyPair>& kp) {
  Ring r;
  for (const KeyPair& k : kp) r.members.push_back(k.vk);
  return r;
}

void BM_Gauss1D(benchmark::State& state) {
  const Gauss1DTable table(static_cast<long double>(state.range(0)), 0.25L);
  RandomTape tape(seed_from_hex("be"), "1d");
  for (auto _ : state) benchmark::DoNotOptimize(dgauss1d_sample(table, tape));
}
BENCHMARK(BM_Gauss1D)->Arg(2)->Arg(16)->Arg(1000);

void BM_Klein(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const PublicParams pp = params(n);
  RandomTape tg(seed_from_hex("be"), "klein");
  const TrapdoorPair td = trap_gen(n, pp.m, pp.q64(), tg);
  const KleinSampler ks(td.s);
  const long double sigma = ks.gs_norm() * omega(pp.m);
  const ZqVector y(n, pp.q64());
  RandomTape tape(seed_from_hex("be"), "draws");
  for (auto _ : state) benchmark::DoNotOptimize(sample_gaussian(td.a, ks, y, sigma, tape));
}
BENCHMARK(BM_Klein)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_TrapGen(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const PublicParams pp = params(n);
  int i = 0;
  for (auto _ : state) {
    RandomTape tg(seed_from_hex("be"), "tg" + std::to_string(i++));
    benchmark::DoNotOptimize(trap_gen(n, pp.m, pp.q64(), tg));
  }
}
BENCHMARK(BM_TrapGen)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Sign(benchmark::State& state) {
  const PublicParams pp = params(state.range(0));
  const auto kp = keys(pp, state.range(1));
  const Ring ring = ring_of(kp);
  const std::vector<std::uint8_t> mu{1, 0, 1, 1};
  int i = 0;
  for (auto _ : state) {
    RandomTape tape(seed_from_hex("be"), "sign" + std::to_string(i++));
    benchmark::DoNotOptimize(sign(pp, mu, ring, kp[0].sk, tape));
  }
}
BENCHMARK(BM_Sign)->Args({2, 2})->Args({2, 5})->Args({4, 2})->Unit(benchmark::kMillisecond);

void BM_Verify(benchmark::State& state) {
  const PublicParams pp = params(state.range(0));
  const auto kp = keys(pp, state.range(1));
  const Ring ring = ring_of(kp);
  const std::vector<std::uint8_t> mu{1, 0, 1, 1};
  RandomTape tape(seed_from_hex("be"), "sig");
  const Signature sig = sign(pp, mu, ring, kp[0].sk, tape);
  for (auto _ : state) benchmark::DoNotOptimize(verify(pp, mu, ring, sig));
}
BENCHMARK(BM_Verify)->Args({2, 2})->Args({2, 5})->Args({4, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
