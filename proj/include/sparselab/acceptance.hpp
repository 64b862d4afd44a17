// The acceptance gate: eight end-to-end checks with pinned tolerances, each
// reported as a single pass/fail line with the measured numbers.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sparselab/corpus.hpp"
#include "sparselab/exponents.hpp"
#include "sparselab/heatlp.hpp"
#include "sparselab/sharpness.hpp"
#include "sparselab/sparse.hpp"
#include "sparselab/weights.hpp"

namespace sparselab {

inline constexpr std::uint64_t kAcceptanceSeed = 1729;

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

template <typename F>
CriterionResult timed_criterion(const std::string& name, F body) {
  CriterionResult res;
  res.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(res);
  } catch (const std::exception& e) {
    res.pass = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

inline double l2_norm(const SampledFunction& f) {
  double s = 0.0;
  for (int j = 0; j < f.size(); ++j) s += f[j] * f[j];
  return std::sqrt(s / f.size());
}

}  // namespace detail

// 1. ||S f||_2 / ||f||_2 = 2^{-1/2} within 2% for band-limited mean-zero
//    inputs, vertical and gradient kinds, in under 10 seconds.
inline CriterionResult criterion_plancherel(std::uint64_t seed) {
  return detail::timed_criterion("plancherel-ratio", [&](CriterionResult& res) {
    const auto grid = make_time_grid();
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    const double target = std::sqrt(0.5);
    for (int i = 0; i < 10; ++i) {
      const auto f = random_band_limited(rng, 4096, 1, 64);
      for (const auto& kind : {kind_g(), kind_G()}) {
        const auto s = square_function(f, kind, grid);
        const double ratio = detail::l2_norm(s.s) / detail::l2_norm(f);
        worst = std::max(worst, std::fabs(ratio / target - 1.0));
      }
    }
    std::ostringstream os;
    os << "max |ratio/2^{-1/2} - 1| = " << std::scientific << std::setprecision(3) << worst
       << " (tol 2e-2, 10 functions x 2 kinds, N=4096)";
    res.detail = os.str();
    res.pass = worst <= 0.02;
  });
}

// 2. Reproducing identity defect below 1e-3 for alpha in {1,2} on the default
//    time grid.
inline CriterionResult criterion_reproducing(std::uint64_t seed) {
  return detail::timed_criterion("calderon-reproducing", [&](CriterionResult& res) {
    const auto grid = make_time_grid();
    std::mt19937_64 rng(seed);
    const auto f = random_band_limited(rng, 1024, 1, 32);
    std::ostringstream os;
    bool ok = true;
    for (double alpha : {1.0, 2.0}) {
      const auto rep = reproducing_check(f, alpha, grid);
      ok = ok && !rep.degenerate && rep.rel_error < 1e-3;
      os << "alpha=" << alpha << ": rel err " << std::scientific << std::setprecision(3)
         << rep.rel_error << "  ";
    }
    res.detail = os.str() + "(tol 1e-3)";
    res.pass = ok;
  });
}

// 3. Extremal sweeps: fitted lhs and rhs slopes within 0.05 of the predicted
//    exponent for three (p0,q0) configurations, one p per branch, under 5 s.
inline CriterionResult criterion_sharpness_slopes() {
  return detail::timed_criterion("sharpness-slopes", [&](CriterionResult& res) {
    struct Case {
      double p0, q0, p;
    };
    const std::vector<Case> cases = {{1.0, 4.0, 2.25},      {1.0, 4.0, 3.25},
                                     {1.0, infinity, 2.5},  {1.0, infinity, 4.0},
                                     {1.5, 6.0, 2.5},       {1.5, 6.0, 4.5}};
    const auto ladder = eps_ladder(6, 14);
    bool ok = true;
    std::ostringstream os;
    os << std::fixed << std::setprecision(3);
    for (const auto& c : cases) {
      const auto sweep = sharpness_sweep(c.p0, c.q0, c.p, ladder);
      const bool good = std::fabs(sweep.lhs_slope - sweep.target) <= 0.05 &&
                        std::fabs(sweep.rhs_slope - sweep.target) <= 0.05;
      ok = ok && good;
      os << "(p0=" << c.p0 << ",q0=" << c.q0 << ",p=" << c.p << "): lhs " << sweep.lhs_slope
         << " rhs " << sweep.rhs_slope << " target " << sweep.target << "; ";
    }
    res.detail = os.str() + "(tol 0.05)";
    res.pass = ok;
  });
}

// 4. Muckenhoupt blow-up of the extremal weight: anchored characteristic has
//    slope -(p/p0 - 1) within 0.05, and the finite scan family reproduces the
//    anchored value at eps = 2^-6 within 10%.
inline CriterionResult criterion_ap_slope() {
  return detail::timed_criterion("ap-power-slope", [&](CriterionResult& res) {
    const double p0 = 1.0, q0 = 4.0, p = 2.25;
    const double P = p / p0;
    const auto ladder = eps_ladder(6, 14);
    std::vector<double> chars;
    for (double e : ladder)
      chars.push_back(ap_anchored(sharpness_exponents(p0, q0, p, e).ew, P));
    const double slope = slope_fit(ladder, chars);
    const double target = -(P - 1.0);
    const double e0 = ladder.front();
    const auto scan = make_scan_family();
    const double anchored = ap_anchored(sharpness_exponents(p0, q0, p, e0).ew, P);
    const double scanned =
        ap_characteristic(PowerWeight{sharpness_exponents(p0, q0, p, e0).ew}, P, scan);
    const double rel = std::fabs(scanned - anchored) / anchored;
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << "slope " << slope << " target " << target
       << " (tol 0.05); scan/anchored rel diff " << std::scientific << std::setprecision(3) << rel
       << " (tol 0.1)";
    res.detail = os.str();
    res.pass = std::fabs(slope - target) <= 0.05 && rel <= 0.1;
  });
}

// 5. The exponent identities hold to 1e-12 across a 100-point random sample:
//    both extremal-exponent identities, the critical-index branch equation,
//    omega at the critical index, and exact A_p duality for power weights.
inline CriterionResult criterion_identities(std::uint64_t seed) {
  return detail::timed_criterion("exponent-identities", [&](CriterionResult& res) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double p0 = uniform(rng, 1.0, 1.95);
      const double q0 = (i % 5 == 0) ? infinity : uniform(rng, 2.5, 40.0);
      const double p = uniform(rng, 2.05, 6.0);
      worst = std::max(worst, std::fabs(sharpness_identity_case1(p0, p)));
      worst = std::max(worst, std::fabs(sharpness_identity_case2(q0, p)));
      const double cp = critical_p(p0, q0);  // self-checks its branch identity
      if (!std::isinf(q0)) {
        const double omega = (q0 - cp) / (cp - p0);
        worst = std::max(worst, std::fabs(omega * 2.0 * star(q0) - q0) / q0);
      }
      const double pp = uniform(rng, 1.2, 4.0);
      // duality needs -1 < a < pp - 1 so both anchored quotients exist
      const double a = uniform(rng, -0.5, 0.9 * (pp - 1.0));
      const double pprime = conj(pp);
      const double lhs = ap_anchored(a * (1.0 - pprime), pprime);
      const double rhs = std::pow(ap_anchored(a, pp), pprime - 1.0);
      worst = std::max(worst, std::fabs(lhs - rhs) / rhs);
    }
    std::ostringstream os;
    os << "max residual " << std::scientific << std::setprecision(3) << worst
       << " over 100 samples (tol 1e-12)";
    res.detail = os.str();
    res.pass = worst <= 1e-12;
  });
}

// 6. Stress corpus: every constructed family verifies strictly 1/2-sparse with
//    disjoint witnesses, and the domination ratios against g = 1 are finite
//    with max/median < 50.
inline CriterionResult criterion_sparse_stress(std::uint64_t seed) {
  return detail::timed_criterion("sparse-stress", [&](CriterionResult& res) {
    const int n = 2048;
    SparseBuildConfig cfg;
    cfg.p0 = 1.0;
    cfg.q0 = 4.0;
    cfg.max_depth = 6;
    const auto corpus = stress_corpus(seed, static_cast<std::size_t>(n));
    const auto ones = constant_function(n, 1.0);
    int sparse_ok = 0;
    double worst_witness = 1.0;
    std::vector<double> ratios;
    for (const auto& f : corpus) {
      const auto fam = build_sparse(f, cfg);
      const auto ver = verify_sparsity(fam);
      if (ver.ok) ++sparse_ok;
      worst_witness = std::min(worst_witness, ver.worst_ratio);
      const auto dom = domination_check(f, ones, fam, cfg);
      ratios.push_back(dom.ratio);
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double peak = sorted.back();
    bool finite = true;
    for (double r : ratios) finite = finite && std::isfinite(r);
    std::ostringstream os;
    os << sparse_ok << "/" << corpus.size() << " families sparse, worst witness "
       << std::fixed << std::setprecision(4) << worst_witness << ", ratio max/median "
       << std::setprecision(2) << peak / median << " (tol 50)";
    res.detail = os.str();
    res.pass = sparse_ok == static_cast<int>(corpus.size()) && finite && peak / median < 50.0;
  });
}

// 7. Off-diagonal kernel bound: empirical sup never exceeds the volume-scaled
//    Gaussian bound for t in {1e-4, 1e-3} and requested gaps d = 4,8,16 sqrt(t)
//    (gaps clamp to the torus where needed).
inline CriterionResult criterion_offdiag() {
  return detail::timed_criterion("offdiag-bound", [&](CriterionResult& res) {
    bool ok = true;
    double worst = 0.0;
    std::ostringstream os;
    for (double t : {1e-4, 1e-3}) {
      for (double k : {4.0, 8.0, 16.0}) {
        const auto pl = place_offdiag(t, k);
        const auto rep = offdiag_audit(t, pl.i1, pl.i2, 1.0, 4.0);
        ok = ok && rep.ratio <= 1.0;
        worst = std::max(worst, rep.ratio);
        if (pl.d_achieved < pl.d_requested)
          os << "[t=" << t << ", d=" << k << " rt clamped to " << std::setprecision(3)
             << pl.d_achieved / std::sqrt(t) << " rt] ";
      }
    }
    std::ostringstream head;
    head << "max empirical/bound " << std::scientific << std::setprecision(3) << worst
         << " (tol 1) " << os.str();
    res.detail = head.str();
    res.pass = ok;
  });
}

// 8. Weak-type ceilings: empirical weak-(1,1) constant of the maximal function
//    at most 10, of the grand maximal square function at most 100, with the
//    output distribution reported.
inline CriterionResult criterion_weak_type(std::uint64_t seed) {
  return detail::timed_criterion("weak-type-ceilings", [&](CriterionResult& res) {
    const int n = 2048;
    std::mt19937_64 rng(seed);
    std::vector<SampledFunction> fns;
    fns.push_back(spike(static_cast<std::size_t>(n), 0.5, 1.0 / 64.0));
    fns.push_back(random_band_limited(rng, static_cast<std::size_t>(n), 1, 32));
    fns.push_back(smooth_bump(static_cast<std::size_t>(n), 0.3, 0.05));
    const auto grid = make_time_grid();
    const DyadicInterval root{0, 0};
    double worst_hl = 0.0, worst_grand = 0.0;
    WeakTypeReport spike_dist;
    for (std::size_t i = 0; i < fns.size(); ++i) {
      const auto& f = fns[i];
      const auto hl = weak_type_measure(hl_maximal(f, 1.0), f, 1.0);
      const auto grand =
          weak_type_measure(grand_maximal_S_star(f, root, 4.0, kind_g(), grid), f, 1.0);
      worst_hl = std::max(worst_hl, hl.constant);
      worst_grand = std::max(worst_grand, grand.constant);
      if (i == 0) spike_dist = grand;
    }
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << "hl C = " << worst_hl
       << " (tol 10), grand C = " << worst_grand << " (tol 100); spike grand deciles:";
    for (double q : spike_dist.quantiles) os << " " << std::setprecision(3) << q;
    res.detail = os.str();
    res.pass = worst_hl <= 10.0 && worst_grand <= 100.0;
  });
}

inline std::vector<CriterionResult> run_acceptance(std::uint64_t seed = kAcceptanceSeed) {
  std::vector<CriterionResult> all;
  all.push_back(criterion_plancherel(seed));
  all.push_back(criterion_reproducing(seed + 1));
  all.push_back(criterion_sharpness_slopes());
  all.push_back(criterion_ap_slope());
  all.push_back(criterion_identities(seed + 2));
  all.push_back(criterion_sparse_stress(seed + 3));
  all.push_back(criterion_offdiag());
  all.push_back(criterion_weak_type(seed + 4));
  // Wall-clock budgets are part of the gate for these two.
  for (auto& r : all) {
    const double limit =
        r.name == "plancherel-ratio" ? 10.0 : (r.name == "sharpness-slopes" ? 5.0 : 0.0);
    if (limit > 0.0 && r.seconds >= limit) {
      r.pass = false;
      r.detail += " [over " + std::to_string(limit) + " s budget]";
    }
  }
  return all;
}

inline bool all_passed(const std::vector<CriterionResult>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

}  // namespace sparselab
