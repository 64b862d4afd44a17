// Heat semigroup of L = -Delta on the periodic unit interval as an exact
// Fourier multiplier, the vertical/gradient/general-order square functions,
// Hardy-Littlewood and grand maximal operators, and off-diagonal kernel audits.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "sparselab/fft.hpp"
#include "sparselab/lattice.hpp"
#include "sparselab/parallel.hpp"

namespace sparselab {

// Log-uniform nodes for the dt/t quadrature, trapezoid weights in log t.
struct TimeGrid {
  std::vector<double> t;
  std::vector<double> w;  // sum = log(t_max/t_min)
};

inline TimeGrid make_time_grid(double t_min = 1e-8, double t_max = 1e2, int m = 400) {
  if (!(t_min > 0.0 && t_min < t_max)) throw precondition_error("time grid: need 0 < t_min < t_max");
  if (m < 2) throw precondition_error("time grid: need at least 2 nodes");
  TimeGrid g;
  g.t.resize(static_cast<std::size_t>(m));
  g.w.assign(static_cast<std::size_t>(m), 0.0);
  const double v0 = std::log(t_min), dv = (std::log(t_max) - v0) / (m - 1);
  for (int i = 0; i < m; ++i) g.t[i] = std::exp(v0 + i * dv);
  for (int i = 0; i + 1 < m; ++i) {
    g.w[i] += 0.5 * dv;
    g.w[i + 1] += 0.5 * dv;
  }
  return g;
}

struct SquareFunctionKind {
  enum class Type { vertical_g, gradient_G, general_n };
  Type type = Type::vertical_g;
  double alpha = 1.0;  // order of (tL)^alpha e^{-tL}, general_n only
};

inline SquareFunctionKind kind_g() { return {SquareFunctionKind::Type::vertical_g, 0.0}; }
inline SquareFunctionKind kind_G() { return {SquareFunctionKind::Type::gradient_G, 0.0}; }
inline SquareFunctionKind kind_n(double alpha) {
  if (!(alpha > 0.0)) throw precondition_error("kind_n: need alpha > 0");
  return {SquareFunctionKind::Type::general_n, alpha};
}

// Symbol of Q_t at frequency xi: (t xi^2)^{1/2} e^{-t xi^2} (vertical),
// i sqrt(t) xi e^{-t xi^2} (gradient), or Gamma(alpha)^{-1}(t xi^2)^alpha e^{-t xi^2}.
inline std::complex<double> q_multiplier(const SquareFunctionKind& kind, double t, double xi) {
  const double u = t * xi * xi;
  switch (kind.type) {
    case SquareFunctionKind::Type::vertical_g:
      return {std::sqrt(u) * std::exp(-u), 0.0};
    case SquareFunctionKind::Type::gradient_G:
      return {0.0, std::sqrt(t) * xi * std::exp(-u)};
    case SquareFunctionKind::Type::general_n:
      if (u == 0.0) return {0.0, 0.0};
      return {std::pow(u, kind.alpha) * std::exp(-u) / std::tgamma(kind.alpha), 0.0};
  }
  return {0.0, 0.0};
}

inline double heat_frequency(int k) { return 2.0 * M_PI * k; }

// Apply a frequency multiplier and return the real part. The multiplier is
// evaluated on k = 0..N/2; negative frequencies get the Hermitian extension
// m(-xi) = conj(m(xi)), which all multipliers here satisfy.
inline SampledFunction apply_multiplier(const SampledFunction& f,
                                        const std::function<std::complex<double>(double)>& m) {
  auto spec = fft::forward(f);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= m(heat_frequency(static_cast<int>(k)));
  return fft::inverse(spec, f.size());
}

inline SampledFunction q_apply(const SquareFunctionKind& kind, double t, const SampledFunction& f) {
  if (!(t > 0.0)) throw precondition_error("q_apply: need t > 0");
  return apply_multiplier(f, [&](double xi) { return q_multiplier(kind, t, xi); });
}

struct SquareFunctionResult {
  SampledFunction s;
  bool band_warning = false;  // time grid does not cover the active spectral band
};

namespace detail {

struct ActiveBand {
  int k_min = 0, k_max = 0;  // lowest/highest active nonzero mode; 0 if none
};

inline ActiveBand active_band(const std::vector<std::complex<double>>& spec) {
  double peak = 0.0;
  for (const auto& c : spec) peak = std::max(peak, std::abs(c));
  ActiveBand b;
  if (peak == 0.0) return b;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    if (std::abs(spec[k]) > 1e-12 * peak) {
      if (b.k_min == 0) b.k_min = static_cast<int>(k);
      b.k_max = static_cast<int>(k);
    }
  }
  return b;
}

inline bool band_covered(const ActiveBand& b, const TimeGrid& grid) {
  if (b.k_min == 0) return true;
  const double xi_min = heat_frequency(b.k_min), xi_max = heat_frequency(b.k_max);
  return grid.t.front() <= 0.01 / (xi_max * xi_max) && grid.t.back() >= 100.0 / (xi_min * xi_min);
}

// w_i |Q_{t_i} f|^2 accumulated over the nodes with t_i in [a,b], in ascending
// t order (chunked when SPARSELAB_THREADS allows; chunk merge order is fixed).
inline std::vector<double> accumulate_energy(const std::vector<std::complex<double>>& spec,
                                             const SquareFunctionKind& kind, const TimeGrid& grid,
                                             double a, double b, int n) {
  std::vector<int> nodes;
  for (int i = 0; i < static_cast<int>(grid.t.size()); ++i)
    if (grid.t[i] >= a && grid.t[i] <= b) nodes.push_back(i);
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  if (nodes.empty()) return acc;
  std::vector<std::vector<double>> partial(chunk_ranges(static_cast<int>(nodes.size()), worker_count()).size());
  parallel_chunks(static_cast<int>(nodes.size()), [&](int chunk, int lo, int hi) {
    std::vector<double> local(static_cast<std::size_t>(n), 0.0);
    std::vector<std::complex<double>> work(spec.size());
    for (int q = lo; q < hi; ++q) {
      const int i = nodes[static_cast<std::size_t>(q)];
      for (std::size_t k = 0; k < spec.size(); ++k)
        work[k] = spec[k] * q_multiplier(kind, grid.t[i], heat_frequency(static_cast<int>(k)));
      const SampledFunction u = fft::inverse(work, n);
      for (int j = 0; j < n; ++j) local[static_cast<std::size_t>(j)] += grid.w[static_cast<std::size_t>(i)] * u[j] * u[j];
    }
    partial[static_cast<std::size_t>(chunk)] = std::move(local);
  });
  for (const auto& loc : partial)
    for (int j = 0; j < n; ++j) acc[static_cast<std::size_t>(j)] += loc[static_cast<std::size_t>(j)];
  return acc;
}

}  // namespace detail

// S^{[a,b]} f = (sum_{t_i in [a,b]} w_i |Q_{t_i} f|^2)^{1/2} pointwise.
inline SquareFunctionResult truncated_square_function(const SampledFunction& f,
                                                      const SquareFunctionKind& kind, double a,
                                                      double b, const TimeGrid& grid) {
  const int n = f.size();
  if (n < (1 << 8)) throw precondition_error("square_function: need N >= 256");
  const auto spec = fft::forward(f);
  SquareFunctionResult out;
  out.band_warning = !detail::band_covered(detail::active_band(spec), grid);
  auto acc = detail::accumulate_energy(spec, kind, grid, a, b, n);
  for (auto& v : acc) v = std::sqrt(v);
  out.s = SampledFunction{std::move(acc)};
  return out;
}

inline SquareFunctionResult square_function(const SampledFunction& f, const SquareFunctionKind& kind,
                                            const TimeGrid& grid) {
  return truncated_square_function(f, kind, 0.0, infinity, grid);
}

// Uncentered dyadic Hardy-Littlewood maximal function M_p f = (M |f|^p)^{1/p}:
// at each point the max of p-averages over the dyadic intervals of the standard
// and one-third-shifted lattices containing it, levels 0..max_depth.
inline SampledFunction hl_maximal(const SampledFunction& f, double p, int max_depth = kMaxDepth) {
  if (!(p >= 1.0) || std::isinf(p)) throw precondition_error("hl_maximal: need finite p >= 1");
  const int n = f.size();
  if (!is_power_of_two(n)) throw precondition_error("hl_maximal: grid size must be a power of two");
  int g = 0;
  while ((1 << g) < n) ++g;
  const int depth = std::min(max_depth, g);
  std::vector<double> fp(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) fp[static_cast<std::size_t>(j)] = std::pow(std::fabs(f[j]), p);
  detail::CellPrefix ps(fp);
  std::vector<double> best(static_cast<std::size_t>(n), 0.0);
  for (int lev = 0; lev <= depth; ++lev) {
    const int cells = n >> lev;  // cells per interval
    for (int k = 0; k < (1 << lev); ++k) {
      const std::int64_t a = static_cast<std::int64_t>(k) * cells;
      const double mean = ps.range_sum(a, a + cells - 1) / cells;
      for (int j = 0; j < cells; ++j) {
        auto& b = best[static_cast<std::size_t>(a + j)];
        b = std::max(b, mean);
      }
    }
    const int shift = static_cast<int>(std::lround(cells / 3.0));
    if (lev > 0 && shift > 0) {
      for (int k = 0; k + 1 < (1 << lev); ++k) {
        const std::int64_t a = static_cast<std::int64_t>(k) * cells + shift;
        const double mean = ps.range_sum(a, a + cells - 1) / cells;
        for (int j = 0; j < cells; ++j) {
          auto& b = best[static_cast<std::size_t>(a + j)];
          b = std::max(b, mean);
        }
      }
    }
  }
  SampledFunction out{std::move(best)};
  for (auto& v : out.samples) v = std::pow(v, 1.0 / p);
  return out;
}

// Grand maximal function of the square function, localized to Q0:
// S*_{Q0} f(x) = sup over dyadic P with x in P, P subset of Q0, of the
// q0-average over P of S^{[l(P)^2, infty)} f. Zero outside Q0.
inline SampledFunction grand_maximal_S_star(const SampledFunction& f, const DyadicInterval& q0_cube,
                                            double q0, const SquareFunctionKind& kind,
                                            const TimeGrid& grid, int max_depth = 10) {
  if (!(q0 > 2.0)) throw precondition_error("grand_maximal: need q0 > 2");
  const int n = f.size();
  int g = 0;
  while ((1 << g) < n) ++g;
  const int depth = std::min(max_depth, g);
  if (q0_cube.level > depth) throw precondition_error("grand_maximal: Q0 below max depth");

  const auto spec = fft::forward(f);
  const int m = static_cast<int>(grid.t.size());
  // Node energies e_i(x) = w_i |Q_{t_i} f(x)|^2, then cumulative-from-the-top
  // snapshots at the per-level thresholds t >= l(P)^2 = 4^{-lev}.
  std::vector<int> first_node(static_cast<std::size_t>(depth + 1), m);
  for (int lev = q0_cube.level; lev <= depth; ++lev) {
    const double a = std::ldexp(1.0, -2 * lev);
    first_node[static_cast<std::size_t>(lev)] =
        static_cast<int>(std::lower_bound(grid.t.begin(), grid.t.end(), a) - grid.t.begin());
  }
  std::vector<std::vector<double>> snap(static_cast<std::size_t>(depth + 1));
  {
    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
    std::vector<std::complex<double>> work(spec.size());
    std::vector<std::pair<int, int>> pending;  // (first_node, lev), descending first_node
    for (int l = depth; l >= q0_cube.level; --l) pending.emplace_back(first_node[static_cast<std::size_t>(l)], l);
    std::sort(pending.begin(), pending.end(), [](auto a_, auto b_) { return a_.first > b_.first; });
    std::size_t next = 0;
    for (int i = m - 1; i >= -1; --i) {
      while (next < pending.size() && pending[next].first > i) {
        snap[static_cast<std::size_t>(pending[next].second)] = acc;
        ++next;
      }
      if (i < 0) break;
      for (std::size_t k = 0; k < spec.size(); ++k)
        work[k] = spec[k] * q_multiplier(kind, grid.t[static_cast<std::size_t>(i)],
                                         heat_frequency(static_cast<int>(k)));
      const SampledFunction u = fft::inverse(work, n);
      for (int j = 0; j < n; ++j)
        acc[static_cast<std::size_t>(j)] += grid.w[static_cast<std::size_t>(i)] * u[j] * u[j];
    }
    while (next < pending.size()) {
      snap[static_cast<std::size_t>(pending[next].second)] = acc;
      ++next;
    }
  }

  std::vector<double> best(static_cast<std::size_t>(n), 0.0);
  const bool use_max = std::isinf(q0);
  for (int lev = q0_cube.level; lev <= depth; ++lev) {
    const auto& c = snap[static_cast<std::size_t>(lev)];
    const int cells = n >> lev;
    const std::int64_t k_lo = q0_cube.index << (lev - q0_cube.level);
    const std::int64_t k_hi = (q0_cube.index + 1) << (lev - q0_cube.level);
    for (std::int64_t k = k_lo; k < k_hi; ++k) {
      const std::int64_t a = k * cells;
      double val;
      if (use_max) {
        val = 0.0;
        for (int j = 0; j < cells; ++j) val = std::max(val, c[static_cast<std::size_t>(a + j)]);
        val = std::sqrt(val);
      } else {
        double s = 0.0;
        for (int j = 0; j < cells; ++j) s += std::pow(c[static_cast<std::size_t>(a + j)], 0.5 * q0);
        val = std::pow(s / cells, 1.0 / q0);
      }
      for (int j = 0; j < cells; ++j) {
        auto& b = best[static_cast<std::size_t>(a + j)];
        b = std::max(b, val);
      }
    }
  }
  return SampledFunction{std::move(best)};
}

struct ReproducingReport {
  double rel_error = 0.0;
  bool degenerate = false;  // no active nonzero mode (e.g. constant f)
};

// Relative L^2 defect of the reproducing identity f = int Q_t^{(alpha)} f dt/t
// under the grid quadrature, evaluated spectrally (Parseval).
inline ReproducingReport reproducing_check(const SampledFunction& f, double alpha,
                                           const TimeGrid& grid) {
  if (!(alpha > 0.0)) throw precondition_error("reproducing_check: need alpha > 0");
  const auto spec = fft::forward(f);
  const int n = f.size();
  const auto kind = kind_n(alpha);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double mult = (k == 0 || static_cast<int>(k) == n / 2) ? 1.0 : 2.0;
    const double e2 = std::norm(spec[k]);
    if (e2 == 0.0) continue;
    double r = 0.0;
    const double xi = heat_frequency(static_cast<int>(k));
    for (std::size_t i = 0; i < grid.t.size(); ++i)
      r += grid.w[i] * q_multiplier(kind, grid.t[i], xi).real();
    num += mult * (1.0 - r) * (1.0 - r) * e2;
    den += mult * e2;
  }
  ReproducingReport rep;
  rep.degenerate = detail::active_band(spec).k_min == 0;
  rep.rel_error = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return rep;
}

struct OffdiagReport {
  double empirical = 0.0;  // sup of the kernel over I2 x I1
  double bound = 0.0;      // |I1|^{-1/p0} |I2|^{1/q0} e^{-c d^2/t}, c = 1/8
  double ratio = 0.0;
  double d = 0.0;  // periodic gap between the intervals
};

// Periodic heat kernel, image sum truncated at |m| <= 3 (error < 1e-16 for t <= 0.1).
inline double heat_kernel(double t, double u) {
  double s = 0.0;
  for (int m = -3; m <= 3; ++m) s += std::exp(-(u + m) * (u + m) / (4.0 * t));
  return s / std::sqrt(4.0 * M_PI * t);
}

inline constexpr double kOffdiagC = 0.125;

inline OffdiagReport offdiag_audit(double t, const Interval& i1, const Interval& i2, double p0,
                                   double q0) {
  if (!(t > 0.0)) throw precondition_error("offdiag_audit: need t > 0");
  const double rt = std::sqrt(t);
  if (std::fabs(i1.length() - 2.0 * rt) > 1e-9 || std::fabs(i2.length() - 2.0 * rt) > 1e-9)
    throw precondition_error("offdiag_audit: intervals must have length 2 sqrt(t)");
  OffdiagReport rep;
  const int samples = 256;
  for (int a = 0; a < samples; ++a) {
    const double x = i2.lo + (a + 0.5) * i2.length() / samples;
    for (int b = 0; b < samples; ++b) {
      const double y = i1.lo + (b + 0.5) * i1.length() / samples;
      rep.empirical = std::max(rep.empirical, heat_kernel(t, x - y));
    }
  }
  double dc = std::fabs(i2.center() - i1.center());
  dc = std::fabs(dc - std::round(dc));  // periodic distance of centers
  rep.d = std::max(0.0, dc - 2.0 * rt);
  const double vol = std::pow(i1.length(), -1.0 / p0) *
                     (std::isinf(q0) ? 1.0 : std::pow(i2.length(), 1.0 / q0));
  rep.bound = vol * std::exp(-kOffdiagC * rep.d * rep.d / t);
  rep.ratio = rep.empirical / rep.bound;
  return rep;
}

// Places two radius-sqrt(t) intervals at the requested gap d, clamped to the
// torus (antipodal centers) when 2 sqrt(t) + d exceeds 1/2.
struct OffdiagPlacement {
  Interval i1, i2;
  double d_requested = 0.0;
  double d_achieved = 0.0;
};

inline OffdiagPlacement place_offdiag(double t, double d_over_rt) {
  const double rt = std::sqrt(t);
  OffdiagPlacement p;
  p.d_requested = d_over_rt * rt;
  const double dc = std::min(2.0 * rt + p.d_requested, 0.5);
  p.d_achieved = std::max(0.0, dc - 2.0 * rt);
  p.i1 = {0.1, 0.1 + 2.0 * rt};
  p.i2 = {p.i1.lo + dc, p.i1.hi + dc};
  return p;
}

}  // namespace sparselab
