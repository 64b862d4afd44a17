#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "sparselab/lattice.hpp"
#include "sparselab/sharpness.hpp"

using namespace sparselab;
using Catch::Approx;

TEST_CASE("slope fit recovers an exact power law") {
  std::vector<double> xs{0.1, 0.2, 0.4, 0.8}, ys;
  for (double x : xs) ys.push_back(3.0 * std::pow(x, -2.0));
  CHECK(slope_fit(xs, ys) == Approx(-2.0).epsilon(1e-12));
  CHECK_THROWS_AS(slope_fit({1.0}, {1.0}), precondition_error);
  CHECK_THROWS_AS(slope_fit({1.0, 1.0}, {2.0, 3.0}), precondition_error);
  CHECK_THROWS_AS(slope_fit({1.0, -2.0}, {2.0, 3.0}), precondition_error);
}

TEST_CASE("eps ladder spans the dyadic range") {
  const auto v = eps_ladder();
  REQUIRE(v.size() == 9);
  CHECK(v.front() == std::ldexp(1.0, -6));
  CHECK(v.back() == std::ldexp(1.0, -14));
  CHECK_THROWS_AS(eps_ladder(8, 6), precondition_error);
}

TEST_CASE("case selection splits at the critical exponent") {
  CHECK(sharpness_case(1.0, 4.0, 2.25) == SharpnessCase::low);
  CHECK(sharpness_case(1.0, 4.0, 2.5) == SharpnessCase::low);  // boundary stays low
  CHECK(sharpness_case(1.0, 4.0, 3.25) == SharpnessCase::high);
  CHECK(sharpness_case(1.0, infinity, 2.5) == SharpnessCase::low);
  CHECK(sharpness_case(1.5, 6.0, 4.5) == SharpnessCase::high);
  CHECK_THROWS_AS(sharpness_case(1.5, 6.0, 2.0), precondition_error);
}

TEST_CASE("admissible eps window") {
  CHECK(eps_max(1.0, 4.0, 3.0) == 0.25);  // cap active for the central configs
  const double P = 2.01 / 1.9, r = conj_ratio(3.5, 2.01);
  const double expected = 0.5 * std::min(P, P - 1.0 + 1.0 / r);
  CHECK(eps_max(1.9, 3.5, 2.01) == Approx(expected));
  CHECK(expected < 0.25);  // integrability bound active near p = 2, p0 near 2
  CHECK_THROWS_AS(sharpness_exponents(1.0, 4.0, 3.0, 0.3), precondition_error);
  CHECK_THROWS_AS(sharpness_exponents(1.0, 4.0, 3.0, 0.0), precondition_error);
}

TEST_CASE("sparse-form terms are exactly geometric in the scale") {
  for (double p : {2.25, 3.25}) {
    const double eps = std::ldexp(1.0, -5);
    const double t0 = sharpness_term(1.0, 4.0, p, eps, 0);
    for (int n : {1, 3, 7})
      CHECK(sharpness_term(1.0, 4.0, p, eps, n) / t0 ==
            Approx(std::exp2(-3.0 * n * eps)).epsilon(1e-12));
  }
}

TEST_CASE("closed-form lhs matches the direct term sum") {
  const double eps = std::ldexp(1.0, -4);
  const auto rep = lhs_exact(1.0, 4.0, 3.0, eps);
  CHECK(rep.terms == 161);
  CHECK(sharpness_term(1.0, 4.0, 3.0, eps, 0) == Approx(rep.prefactor).epsilon(1e-12));
  double direct = 0.0;
  for (int n = 0; n < rep.terms; ++n) direct += sharpness_term(1.0, 4.0, 3.0, eps, n);
  CHECK(rep.value == Approx(direct).epsilon(1e-10));
}

TEST_CASE("weighted norms and characteristics take their closed forms") {
  const double eps = std::ldexp(1.0, -6);
  const auto low = rhs_exact(1.0, 4.0, 2.25, eps);
  const double ps_low = star(2.25);  // = 9
  CHECK(low.f_norm == Approx(std::pow(1.25 * eps, -1.0 / 2.25)).epsilon(1e-12));
  CHECK(low.g_norm == Approx(std::pow((2.0 * ps_low - 1.0) * eps, -1.0 / ps_low)).epsilon(1e-12));
  // A_P of x^{1.25-eps} with P = 2.25: the dual exponent collapses to 0.8 eps
  CHECK(low.a_char ==
        Approx(1.0 / ((2.25 - eps) * std::pow(0.8 * eps, 1.25))).epsilon(1e-12));

  const auto high = rhs_exact(1.0, 4.0, 3.25, eps);
  const double ps = star(3.25);
  CHECK(high.f_norm == Approx(std::pow((1.5 * 3.25 - 1.0) * eps, -1.0 / 3.25)).epsilon(1e-12));
  CHECK(high.g_norm == Approx(std::pow((ps - 1.0) * eps, -1.0 / ps)).epsilon(1e-12));
}

TEST_CASE("target slopes for the reference configurations") {
  CHECK(target_slope(1.0, 4.0, 2.25) == Approx(-3.0));
  CHECK(target_slope(1.0, 4.0, 3.25) == Approx(-1.5));
  CHECK(target_slope(1.0, infinity, 4.0) == Approx(-2.0));
  CHECK(target_slope(1.5, 6.0, 2.5) == Approx(-7.0 / 3.0));
  CHECK(target_slope(1.5, 6.0, 4.5) == Approx(-5.0 / 3.0));
}

TEST_CASE("sweeps hit the target slopes on both sides") {
  const auto ladder = eps_ladder();
  struct Config {
    double p0, q0, p;
  };
  for (const auto& c : {Config{1.0, 4.0, 2.25}, Config{1.0, 4.0, 3.25}, Config{1.0, infinity, 4.0}}) {
    const auto rep = sharpness_sweep(c.p0, c.q0, c.p, ladder);
    INFO("p0=" << c.p0 << " q0=" << c.q0 << " p=" << c.p);
    CHECK(std::fabs(rep.lhs_slope - rep.target) < 0.05);
    CHECK(std::fabs(rep.rhs_slope - rep.target) < 0.05);
    CHECK(rep.consistent);
    CHECK(rep.ratio_drift < 0.2);
    for (const auto& pt : rep.points) {
      CHECK(std::isfinite(pt.ratio));
      CHECK(pt.ratio > 0.0);
    }
  }
  CHECK_THROWS_AS(sharpness_sweep(1.0, 4.0, 3.0, {0.01}), precondition_error);
}

TEST_CASE("scan-family characteristics agree with the anchored closed forms") {
  const auto scan = make_scan_family(12);
  const double eps = std::ldexp(1.0, -6);
  for (double p : {2.25, 3.25}) {
    const auto anch = rhs_exact(1.0, 4.0, p, eps, true);
    const auto scanned = rhs_exact(1.0, 4.0, p, eps, false, &scan);
    CHECK(scanned.a_char == Approx(anch.a_char).epsilon(1e-12));
    CHECK(scanned.rh_char == Approx(anch.rh_char).epsilon(1e-12));
    CHECK(scanned.rhs == Approx(anch.rhs).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rhs_exact(1.0, 4.0, 3.0, eps, false, nullptr), precondition_error);
}

TEST_CASE("grid averages of sampled power laws match the closed forms") {
  const int n = 1 << 20;
  SampledFunction f, g;
  for (int j = 0; j < n; ++j) {
    const double x = (j + 0.5) / n;
    f.samples.push_back(std::pow(x, -0.1));
    g.samples.push_back(std::pow(x, 0.3));
  }
  for (int k = 0; k <= 8; ++k) {
    const double b = std::ldexp(1.0, -k);
    const Interval window{0.0, b};
    CHECK(p_average(f, window, 2.0) ==
          Approx(std::pow(power_avg(-0.2, b), 0.5)).epsilon(1e-2));
    CHECK(p_average(g, window, 3.0) ==
          Approx(std::pow(power_avg(0.9, b), 1.0 / 3.0)).epsilon(1e-2));
  }
}
