#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "sparselab/corpus.hpp"
#include "sparselab/heatlp.hpp"

using namespace sparselab;
using Catch::Approx;

namespace {

double l2(const SampledFunction& f) {
  double s = 0.0;
  for (int j = 0; j < f.size(); ++j) s += f[j] * f[j];
  return std::sqrt(s / f.size());
}

SampledFunction cosine_mode(int n, int k) {
  SampledFunction f;
  for (int j = 0; j < n; ++j) f.samples.push_back(std::cos(2.0 * M_PI * k * (j + 0.5) / n));
  return f;
}

}  // namespace

TEST_CASE("time grid weights sum to the log-measure of the window") {
  const auto g = make_time_grid(1e-8, 1e2, 400);
  double s = 0.0;
  for (double w : g.w) s += w;
  CHECK(s == Approx(std::log(1e2 / 1e-8)).epsilon(1e-12));
  CHECK(g.t.front() == Approx(1e-8));
  CHECK(g.t.back() == Approx(1e2));
  CHECK_THROWS_AS(make_time_grid(0.0, 1.0, 10), precondition_error);
  CHECK_THROWS_AS(make_time_grid(1e-4, 1.0, 1), precondition_error);
}

TEST_CASE("multipliers take their analytic values") {
  const double t = 0.013, xi = 11.0;
  CHECK(q_multiplier(kind_g(), t, xi).real() ==
        Approx(std::sqrt(t) * xi * std::exp(-t * xi * xi)).epsilon(1e-14));
  CHECK(q_multiplier(kind_g(), t, xi).imag() == 0.0);
  const auto mg = q_multiplier(kind_G(), t, xi);
  CHECK(mg.real() == 0.0);
  CHECK(mg.imag() == Approx(std::sqrt(t) * xi * std::exp(-t * xi * xi)).epsilon(1e-14));
  const auto mn = q_multiplier(kind_n(1.5), t, xi);
  CHECK(mn.real() ==
        Approx(std::pow(t * xi * xi, 1.5) * std::exp(-t * xi * xi) / std::tgamma(1.5)).epsilon(1e-14));
  CHECK_THROWS_AS(kind_n(0.0), precondition_error);
}

TEST_CASE("q_apply on a single cosine mode is exact") {
  const int n = 512, k = 3;
  const auto f = cosine_mode(n, k);
  const double t = 0.01, xi = heat_frequency(k);
  const double amp = std::sqrt(t) * xi * std::exp(-t * xi * xi);
  const auto qv = q_apply(kind_g(), t, f);
  const auto qg = q_apply(kind_G(), t, f);
  for (int j = 0; j < n; ++j) {
    const double x = (j + 0.5) / n;
    CHECK(qv[j] == Approx(amp * std::cos(xi * x)).margin(1e-12));
    CHECK(qg[j] == Approx(-amp * std::sin(xi * x)).margin(1e-12));
  }
}

TEST_CASE("single-mode square function recovers the Plancherel constant") {
  const int n = 512;
  const auto f = cosine_mode(n, 3);
  const auto grid = make_time_grid();
  for (const auto& kind : {kind_g(), kind_G()}) {
    const auto res = square_function(f, kind, grid);
    CHECK_FALSE(res.band_warning);
    CHECK(l2(res.s) / l2(f) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
  }
}

TEST_CASE("reproducing constant is hit by the default time grid") {
  std::mt19937_64 rng(11);
  const auto f = random_band_limited(rng, 512, 1, 16);
  for (double alpha : {1.0, 2.0}) {
    const auto rep = reproducing_check(f, alpha, make_time_grid());
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.rel_error < 1e-3);
  }
  const auto flat = reproducing_check(constant_function(512, 2.0), 1.0, make_time_grid());
  CHECK(flat.degenerate);
}

TEST_CASE("truncated square functions add in quadrature") {
  std::mt19937_64 rng(7);
  const auto f = random_band_limited(rng, 512, 1, 24);
  const auto grid = make_time_grid();
  const double cut = std::sqrt(grid.t[200] * grid.t[201]);  // strictly between two nodes
  const auto whole = square_function(f, kind_g(), grid);
  const auto lo = truncated_square_function(f, kind_g(), 0.0, cut, grid);
  const auto hi = truncated_square_function(f, kind_g(), cut, infinity, grid);
  for (int j = 0; j < f.size(); ++j) {
    const double sum = lo.s[j] * lo.s[j] + hi.s[j] * hi.s[j];
    CHECK(sum == Approx(whole.s[j] * whole.s[j]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(square_function(constant_function(128, 1.0), kind_g(), grid), precondition_error);
}

TEST_CASE("square function commutes with integer-cell translations") {
  std::mt19937_64 rng(3);
  const auto f = random_band_limited(rng, 512, 1, 24);
  const int shift = 37, n = f.size();
  SampledFunction fs;
  for (int j = 0; j < n; ++j) fs.samples.push_back(f[(j + shift) % n]);
  const auto grid = make_time_grid();
  const auto s = square_function(f, kind_g(), grid).s;
  const auto ss = square_function(fs, kind_g(), grid).s;
  for (int j = 0; j < n; ++j) CHECK(ss[j] == Approx(s[(j + shift) % n]).margin(1e-10));
}

TEST_CASE("square function is sublinear") {
  std::mt19937_64 rng(5);
  const auto f = random_band_limited(rng, 512, 1, 16);
  const auto g = random_band_limited(rng, 512, 4, 32);
  SampledFunction sum;
  for (int j = 0; j < 512; ++j) sum.samples.push_back(f[j] + g[j]);
  const auto grid = make_time_grid();
  const auto sf = square_function(f, kind_g(), grid).s;
  const auto sg = square_function(g, kind_g(), grid).s;
  const auto sfg = square_function(sum, kind_g(), grid).s;
  for (int j = 0; j < 512; ++j) CHECK(sfg[j] <= sf[j] + sg[j] + 1e-10);
}

TEST_CASE("band warning flags an uncovered spectrum") {
  const auto f = cosine_mode(512, 1);
  CHECK(square_function(f, kind_g(), make_time_grid(1e-8, 1.0, 200)).band_warning);
  CHECK_FALSE(square_function(f, kind_g(), make_time_grid()).band_warning);
}

TEST_CASE("maximal function dominates the function and fixes constants") {
  std::mt19937_64 rng(2);
  const auto f = random_band_limited(rng, 256, 1, 16);
  const auto m = hl_maximal(f, 1.0);
  for (int j = 0; j < 256; ++j) CHECK(std::fabs(f[j]) <= m[j] + 1e-12);
  const auto mc = hl_maximal(constant_function(256, 3.5), 1.0);
  for (int j = 0; j < 256; ++j) CHECK(mc[j] == Approx(3.5).epsilon(1e-14));
  CHECK_THROWS_AS(hl_maximal(f, infinity), precondition_error);
  SampledFunction odd;
  odd.samples.assign(500, 1.0);
  CHECK_THROWS_AS(hl_maximal(odd, 1.0), precondition_error);
}

TEST_CASE("maximal function agrees with a direct scan") {
  const int n = 64;
  SampledFunction f;
  for (int j = 0; j < n; ++j) f.samples.push_back(static_cast<double>((j * 5) % 7) - 3.0);
  for (double p : {1.0, 2.0}) {
    const auto m = hl_maximal(f, p);
    // same definition, written with direct window sums
    std::vector<double> best(n, 0.0);
    for (int lev = 0; (1 << lev) <= n; ++lev) {
      const int cells = n >> lev;
      auto window = [&](int a) {
        double s = 0.0;
        for (int j = 0; j < cells; ++j) s += std::pow(std::fabs(f[a + j]), p);
        const double mean = s / cells;
        for (int j = 0; j < cells; ++j) best[a + j] = std::max(best[a + j], mean);
      };
      for (int k = 0; k < (1 << lev); ++k) window(k * cells);
      const int shift = static_cast<int>(std::lround(cells / 3.0));
      if (lev > 0 && shift > 0)
        for (int k = 0; k + 1 < (1 << lev); ++k) window(k * cells + shift);
    }
    for (int j = 0; j < n; ++j) CHECK(m[j] == std::pow(best[j], 1.0 / p));
  }
}

TEST_CASE("grand maximal function dominates the root average and localizes") {
  std::mt19937_64 rng(9);
  const auto f = random_band_limited(rng, 512, 1, 16);
  const auto grid = make_time_grid();
  const DyadicInterval root{0, 0};
  const auto star = grand_maximal_S_star(f, root, 4.0, kind_g(), grid, 6);
  const auto tail = truncated_square_function(f, kind_g(), 1.0, infinity, grid);
  const double root_avg = p_average(tail.s, root.interval(), 4.0);
  for (int j = 0; j < 512; ++j) CHECK(star[j] >= root_avg * (1.0 - 1e-10));

  const DyadicInterval half{1, 0};
  const auto local = grand_maximal_S_star(f, half, 4.0, kind_g(), grid, 6);
  for (int j = 256; j < 512; ++j) CHECK(local[j] == 0.0);
  CHECK(local[10] > 0.0);

  CHECK_THROWS_AS(grand_maximal_S_star(f, root, 2.0, kind_g(), grid), precondition_error);
}

TEST_CASE("off-diagonal kernel stays below the volume-Gaussian bound") {
  const double t = 1e-4;
  for (double gap : {4.0, 8.0, 16.0}) {
    const auto pl = place_offdiag(t, gap);
    CHECK(pl.d_achieved == Approx(pl.d_requested));
    const auto rep = offdiag_audit(t, pl.i1, pl.i2, 1.0, 4.0);
    CHECK(rep.ratio <= 1.0);
    CHECK(rep.d == Approx(gap * std::sqrt(t)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(offdiag_audit(t, Interval{0.0, 0.5}, Interval{0.5, 1.0}, 1.0, 4.0),
                  precondition_error);
}

TEST_CASE("doubling the gap quadruples the Gaussian decay rate") {
  const double t = 1e-4;
  const auto p1 = place_offdiag(t, 4.0);
  const auto p2 = place_offdiag(t, 8.0);
  const double e1 = offdiag_audit(t, p1.i1, p1.i2, 1.0, 4.0).empirical;
  const double e2 = offdiag_audit(t, p2.i1, p2.i2, 1.0, 4.0).empirical;
  const double d = 4.0 * std::sqrt(t);
  // log(K(d)/K(2d)) = (4d^2 - d^2)/(4t) for the leading Gaussian image
  CHECK(std::log(e1 / e2) == Approx(3.0 * d * d / (4.0 * t)).epsilon(0.05));
}

TEST_CASE("antipodal clamping caps the achievable gap") {
  const double t = 1e-3;
  const auto pl = place_offdiag(t, 16.0);
  CHECK(pl.d_achieved < pl.d_requested);
  CHECK(pl.d_achieved == Approx(0.5 - 2.0 * std::sqrt(t)));
  const auto rep = offdiag_audit(t, pl.i1, pl.i2, 1.0, 4.0);
  CHECK(rep.ratio <= 1.0);
}
