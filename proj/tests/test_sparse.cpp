#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <random>

#include "sparselab/corpus.hpp"
#include "sparselab/sparse.hpp"

using namespace sparselab;
using Catch::Approx;

TEST_CASE("maximal cover emits maximal dyadic blocks and reproduces the mask") {
  std::vector<std::uint8_t> mask(16, 0);
  for (int j : {0, 1, 2, 3, 6}) mask[static_cast<std::size_t>(j)] = 1;
  const auto cover = maximal_cover(mask, DyadicInterval{0, 0});
  REQUIRE(cover.size() == 2);
  CHECK(cover[0] == DyadicInterval{2, 0});
  CHECK(cover[1] == DyadicInterval{4, 6});
  std::vector<std::uint8_t> rebuilt(16, 0);
  for (const auto& p : cover) {
    const int cells = 16 >> p.level;
    for (int j = 0; j < cells; ++j) rebuilt[static_cast<std::size_t>(p.index * cells + j)] = 1;
  }
  CHECK(rebuilt == mask);
}

TEST_CASE("exceptional set of a constant flips at the reference level") {
  const auto f = constant_function(512, 1.0);
  SparseBuildConfig cfg;
  const auto low = exceptional_set(f, DyadicInterval{0, 0}, 0.5, cfg);
  CHECK(low.count == 512);
  CHECK(low.reference == Approx(1.0));
  const auto high = exceptional_set(f, DyadicInterval{0, 0}, 1.0, cfg);
  CHECK(high.count == 0);  // strict inequality in the set definition
  CHECK_THROWS_AS(exceptional_set(f, DyadicInterval{0, 0}, 0.0, cfg), precondition_error);
}

TEST_CASE("eta calibration of a constant lands exactly at one") {
  const auto f = constant_function(512, 1.0);
  SparseBuildConfig cfg;
  const auto cal = eta_calibrate(f, DyadicInterval{0, 0}, cfg);
  CHECK(cal.eta == 1.0);
  CHECK(cal.count == 0);
}

TEST_CASE("exceptional counts decrease as eta grows") {
  std::mt19937_64 rng(21);
  const auto f = random_band_limited(rng, 512, 1, 24);
  SparseBuildConfig cfg;
  auto cal = eta_calibrate(f, DyadicInterval{0, 0}, cfg);
  REQUIRE(cal.trace.size() >= 3);
  auto trace = cal.trace;
  std::sort(trace.begin(), trace.end());
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i].second <= trace[i - 1].second);
  const std::int64_t budget = 512 / 2 - 1;
  CHECK(cal.count <= budget);
}

TEST_CASE("calibration is invariant under scaling by a power of two") {
  std::mt19937_64 rng(4);
  const auto f = random_band_limited(rng, 512, 1, 16);
  SampledFunction f4;
  for (int j = 0; j < 512; ++j) f4.samples.push_back(4.0 * f[j]);
  SparseBuildConfig cfg;
  const auto a = eta_calibrate(f, DyadicInterval{0, 0}, cfg);
  const auto b = eta_calibrate(f4, DyadicInterval{0, 0}, cfg);
  CHECK(a.eta == b.eta);  // every intermediate scales exactly by powers of two
  CHECK(a.count == b.count);
}

TEST_CASE("sparse family of a bump verifies and keeps the root") {
  const auto f = smooth_bump(512, 0.45, 0.08);
  SparseBuildConfig cfg;
  cfg.max_depth = 4;
  const auto fam = build_sparse(f, cfg);
  REQUIRE_FALSE(fam.members.empty());
  CHECK(fam.members.front().interval == DyadicInterval{0, 0});
  const auto rep = verify_sparsity(fam);
  CHECK(rep.ok);
  CHECK(rep.disjoint);
  CHECK(rep.worst_ratio > 0.5);
}

TEST_CASE("spike recursion nests with the two-level gap forced by halving") {
  auto f = spike(512, 0.5, 1.0 / 64.0);
  SparseBuildConfig cfg;
  cfg.max_depth = 6;
  const auto fam = build_sparse(f, cfg);
  CHECK(verify_sparsity(fam).ok);

  // every selected interval below the root came from a cover two levels down
  for (const auto& m : fam.members) {
    if (m.interval.level == 0) continue;
    bool covered = false;
    for (const auto& a : fam.members)
      if (a.interval.level <= m.interval.level - 2 && contains(a.interval, m.interval))
        covered = true;
    CHECK(covered);
  }

  // the recursion chases the spike
  bool deep_near_spike = false;
  for (const auto& m : fam.members)
    if (m.interval.level >= 4 && std::fabs(m.interval.center() - 0.5) < 0.1)
      deep_near_spike = true;
  CHECK(deep_near_spike);
}

TEST_CASE("sparse form sums the geometric anchored family exactly") {
  SparseFamily fam;
  fam.grid_size = 256;
  for (int k = 0; k <= 6; ++k) fam.members.push_back({DyadicInterval{k, 0}, {}});
  const auto one = constant_function(256, 1.0);
  const double expected = 2.0 - std::ldexp(1.0, -6);
  CHECK(sparse_form(one, one, fam, 1.0, 4.0, 1.0) == Approx(expected).epsilon(1e-15));
  CHECK(sparse_form(one, one, fam, 1.0, 4.0, 5.0) == Approx(expected).epsilon(1e-15));
  CHECK_THROWS_AS(sparse_form(one, one, fam, 1.0, 2.0, 1.0), precondition_error);
  CHECK_THROWS_AS(sparse_form(one, one, fam, 1.0, 4.0, 2.0), precondition_error);
}

TEST_CASE("sparse form is quadratic in f and linear in g") {
  SparseFamily fam;
  fam.grid_size = 256;
  for (int k = 0; k <= 4; ++k) fam.members.push_back({DyadicInterval{k, 0}, {}});
  std::mt19937_64 rng(8);
  SampledFunction f, g;
  for (int j = 0; j < 256; ++j) {
    f.samples.push_back(0.2 + uniform01(rng));
    g.samples.push_back(0.1 + uniform01(rng));
  }
  SampledFunction f3, g2;
  for (int j = 0; j < 256; ++j) {
    f3.samples.push_back(3.0 * f[j]);
    g2.samples.push_back(2.0 * g[j]);
  }
  const double base = sparse_form(f, g, fam, 1.0, 4.0);
  CHECK(sparse_form(f3, g, fam, 1.0, 4.0) == Approx(9.0 * base).epsilon(1e-12));
  CHECK(sparse_form(f, g2, fam, 1.0, 4.0) == Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("domination check rejects signed densities") {
  const auto f = smooth_bump(512, 0.5, 0.1);
  SparseBuildConfig cfg;
  cfg.max_depth = 3;
  const auto fam = build_sparse(f, cfg);
  SampledFunction g = constant_function(512, 1.0);
  g.samples[7] = -1.0;
  CHECK_THROWS_AS(domination_check(f, g, fam, cfg), precondition_error);
}

TEST_CASE("weak type scan on a hand-computed case") {
  SampledFunction tf;
  tf.samples = {4.0, 2.0, 1.0, 1.0};
  const auto one = constant_function(4, 1.0);
  const auto rep = weak_type_measure(tf, one, 1.0);
  CHECK(rep.constant == Approx(1.0));
  REQUIRE(rep.quantiles.size() == 11);
  CHECK(rep.quantiles.front() == 1.0);
  CHECK(rep.quantiles.back() == 4.0);
  CHECK_THROWS_AS(weak_type_measure(tf, constant_function(4, 0.0), 1.0), precondition_error);
  CHECK_THROWS_AS(weak_type_measure(tf, one, infinity), precondition_error);
}

TEST_CASE("build preconditions") {
  SparseBuildConfig cfg;
  CHECK_THROWS_AS(build_sparse(constant_function(128, 1.0), cfg), precondition_error);
  cfg.p0 = 2.0;
  CHECK_THROWS_AS(build_sparse(constant_function(512, 1.0), cfg), precondition_error);
  cfg.p0 = 1.0;
  cfg.q0 = 2.0;
  CHECK_THROWS_AS(build_sparse(constant_function(512, 1.0), cfg), precondition_error);
}

TEST_CASE("small corpus builds verify and dominate with finite ratios") {
  const auto corpus = stress_corpus(3, 512);
  SparseBuildConfig cfg;
  cfg.max_depth = 3;
  const auto one = constant_function(512, 1.0);
  for (int i = 0; i < 3; ++i) {
    const auto fam = build_sparse(corpus[static_cast<std::size_t>(i)], cfg);
    CHECK(verify_sparsity(fam).ok);
    const auto rep = domination_check(corpus[static_cast<std::size_t>(i)], one, fam, cfg);
    CHECK(std::isfinite(rep.ratio));
    CHECK(rep.rhs > 0.0);
  }
}
