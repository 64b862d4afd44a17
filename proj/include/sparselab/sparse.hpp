// Stopping-time construction of a 1/2-sparse family dominating the square
// function, the associated sparse bilinear form, and weak-type diagnostics.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "sparselab/exponents.hpp"
#include "sparselab/heatlp.hpp"
#include "sparselab/lattice.hpp"

namespace sparselab {

enum class MaximalVariant {
  inf_of_global,    // sup_{x in P subset Q0} inf_{y in P} M_{p0} f(y)
  sup_of_averages,  // sup_{x in P subset Q0} (avg_{5P} |f|^{p0})^{1/p0}
};

struct SparseBuildConfig {
  double p0 = 1.0;
  double q0 = 4.0;
  SquareFunctionKind kind = kind_g();
  TimeGrid grid = make_time_grid();
  double eta = 0.0;           // stopping threshold; 0 calibrates per node
  int max_depth = 8;          // recursion depth cap
  double eta_rel_tol = 1e-3;  // calibration bisection tolerance
  MaximalVariant maximal = MaximalVariant::inf_of_global;
};

namespace detail {

inline int grid_log2(int n) {
  if (!is_power_of_two(n)) throw precondition_error("grid size must be a power of two");
  int g = 0;
  while ((1 << g) < n) ++g;
  return g;
}

}  // namespace detail

// Localized maximal function M*_{Q0,p0} f on the cells of Q0 (zero elsewhere):
// the sup over dyadic P with x in P, P subset of Q0, of a per-interval statistic
// chosen by cfg.maximal.
inline std::vector<double> localized_maximal(const SampledFunction& f, const DyadicInterval& q0,
                                             const SparseBuildConfig& cfg) {
  const int n = f.size();
  const int g = detail::grid_log2(n);
  if (q0.level > g) throw precondition_error("localized_maximal: Q0 below grid resolution");
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);

  SampledFunction h;  // inf variant statistic source
  std::vector<double> fp;
  if (cfg.maximal == MaximalVariant::inf_of_global) {
    h = hl_maximal(f, cfg.p0);
  } else {
    fp.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) fp[static_cast<std::size_t>(j)] = std::pow(std::fabs(f[j]), cfg.p0);
  }
  const detail::CellPrefix ps(cfg.maximal == MaximalVariant::sup_of_averages
                                  ? fp
                                  : std::vector<double>(static_cast<std::size_t>(n), 0.0));

  std::function<void(DyadicInterval, double)> walk = [&](DyadicInterval p, double carry) {
    const std::int64_t a = p.index * (n >> p.level);
    const std::int64_t cells = n >> p.level;
    double stat;
    if (cfg.maximal == MaximalVariant::inf_of_global) {
      stat = h[static_cast<int>(a)];
      for (std::int64_t j = 1; j < cells; ++j) stat = std::min(stat, h[static_cast<int>(a + j)]);
    } else {
      const auto [j_lo, j_hi] = detail::cell_range(dilate(p, 5.0), n);
      const double mean = ps.range_sum(j_lo, j_hi) / static_cast<double>(j_hi - j_lo + 1);
      stat = std::pow(mean, 1.0 / cfg.p0);
    }
    carry = std::max(carry, stat);
    if (p.level == g) {
      out[static_cast<std::size_t>(a)] = carry;
      return;
    }
    auto [l, r] = children(p, g);
    walk(l, carry);
    walk(r, carry);
  };
  walk(q0, 0.0);
  return out;
}

// Pointwise max of the localized maximal function and the grand maximal
// truncated square function, on the cells of Q0.
inline std::vector<double> node_majorant(const SampledFunction& f, const DyadicInterval& q0,
                                         const SparseBuildConfig& cfg) {
  const int n = f.size();
  const int g = detail::grid_log2(n);
  auto maj = localized_maximal(f, q0, cfg);
  const SampledFunction sstar = grand_maximal_S_star(f, q0, cfg.q0, cfg.kind, cfg.grid, g);
  const auto [j_lo, j_hi] = detail::cell_range(q0.interval(), n);
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    const int jj = detail::wrap_index(j, n);
    maj[static_cast<std::size_t>(jj)] = std::max(maj[static_cast<std::size_t>(jj)], sstar[jj]);
  }
  return maj;
}

struct ExceptionalSet {
  std::vector<std::uint8_t> mask;  // full-grid cell mask of E(Q0)
  std::int64_t count = 0;
  double reference = 0.0;  // (avg_{5Q0} |f|^{p0})^{1/p0}
};

// E(Q0) = { x in Q0 : max(M*_{Q0,p0} f, S*_{Q0} f)(x) > eta (avg_{5Q0}|f|^{p0})^{1/p0} }.
inline ExceptionalSet exceptional_set(const SampledFunction& f, const DyadicInterval& q0, double eta,
                                      const SparseBuildConfig& cfg) {
  if (!(eta > 0.0)) throw precondition_error("exceptional_set: need eta > 0");
  const int n = f.size();
  const auto maj = node_majorant(f, q0, cfg);
  ExceptionalSet e;
  e.reference = p_average(f, dilate(q0, 5.0), cfg.p0);
  e.mask.assign(static_cast<std::size_t>(n), 0);
  const auto [j_lo, j_hi] = detail::cell_range(q0.interval(), n);
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    const int jj = detail::wrap_index(j, n);
    if (maj[static_cast<std::size_t>(jj)] > eta * e.reference) {
      e.mask[static_cast<std::size_t>(jj)] = 1;
      ++e.count;
    }
  }
  return e;
}

struct EtaCalibration {
  double eta = 1.0;
  std::int64_t count = 0;                              // |E| in cells at the returned eta
  std::vector<std::pair<double, std::int64_t>> trace;  // (eta, |E|) evaluations, in order
};

namespace detail {

// Smallest eta (to rel_tol) whose exceptional set leaves the witness strictly
// above half of Q0: |E| <= cells/2 - 1 in cell counts.
inline EtaCalibration calibrate_from(const std::vector<double>& maj, const DyadicInterval& q0,
                                     double ref, int n, double rel_tol) {
  const auto [j_lo, j_hi] = cell_range(q0.interval(), n);
  const std::int64_t cells = j_hi - j_lo + 1;
  const std::int64_t budget = cells / 2 - 1;
  EtaCalibration cal;
  if (ref == 0.0) {
    cal.trace.emplace_back(1.0, 0);
    return cal;
  }
  if (budget < 0) throw precondition_error("eta calibration: interval too small to halve");
  auto count = [&](double eta) {
    const double thr = eta * ref;
    std::int64_t c = 0;
    for (std::int64_t j = j_lo; j <= j_hi; ++j)
      if (maj[static_cast<std::size_t>(wrap_index(j, n))] > thr) ++c;
    cal.trace.emplace_back(eta, c);
    return c;
  };
  double hi = 1.0;
  int guard = 0;
  while (count(hi) > budget) {
    hi *= 2.0;
    if (++guard > 120) throw internal_error("eta calibration: no feasible threshold found");
  }
  double lo = (hi == 1.0) ? 0.0 : 0.5 * hi;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (count(mid) > budget)
      lo = mid;
    else
      hi = mid;
  }
  cal.eta = hi;
  for (auto it = cal.trace.rbegin(); it != cal.trace.rend(); ++it) {
    if (it->first == hi) {
      cal.count = it->second;
      break;
    }
  }
  return cal;
}

}  // namespace detail

inline EtaCalibration eta_calibrate(const SampledFunction& f, const DyadicInterval& q0,
                                    const SparseBuildConfig& cfg) {
  const auto maj = node_majorant(f, q0, cfg);
  const double ref = p_average(f, dilate(q0, 5.0), cfg.p0);
  return detail::calibrate_from(maj, q0, ref, f.size(), cfg.eta_rel_tol);
}

// Maximal dyadic intervals inside Q0 whose cells all lie in the mask; their
// union reproduces the masked set exactly.
inline std::vector<DyadicInterval> maximal_cover(const std::vector<std::uint8_t>& mask,
                                                 const DyadicInterval& q0) {
  const int n = static_cast<int>(mask.size());
  const int g = detail::grid_log2(n);
  if (q0.level > g) throw precondition_error("maximal_cover: Q0 below grid resolution");
  std::vector<std::int64_t> ps(static_cast<std::size_t>(n) + 1, 0);
  for (int j = 0; j < n; ++j) ps[static_cast<std::size_t>(j) + 1] = ps[static_cast<std::size_t>(j)] + mask[static_cast<std::size_t>(j)];
  std::vector<DyadicInterval> cover;
  std::function<void(DyadicInterval)> walk = [&](DyadicInterval p) {
    const std::int64_t a = p.index * (n >> p.level);
    const std::int64_t cells = n >> p.level;
    const std::int64_t inside = ps[static_cast<std::size_t>(a + cells)] - ps[static_cast<std::size_t>(a)];
    if (inside == cells) {
      cover.push_back(p);
      return;
    }
    if (inside == 0 || p.level == g) return;
    auto [l, r] = children(p, g);
    walk(l);
    walk(r);
  };
  walk(q0);
  return cover;
}

namespace detail {

inline SampledFunction mask_to(const SampledFunction& f, const Interval& window) {
  const int n = f.size();
  SampledFunction out = constant_function(n, 0.0);
  const auto [j_lo, j_hi] = cell_range(window, n);
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    const int jj = wrap_index(j, n);
    out[jj] = f[jj];
  }
  return out;
}

}  // namespace detail

// The stopping-time recursion: at each selected Q keep F_Q = Q \ E(Q) as the
// witness and recurse on f 1_{5P} over the maximal cover P of E(Q). Branches
// that reach the depth cap (or single cells) become leaves with a full witness
// and set the truncated flag.
inline SparseFamily build_sparse(const SampledFunction& f, const SparseBuildConfig& cfg) {
  const int n = f.size();
  const int g = detail::grid_log2(n);
  if (n < (1 << 8)) throw precondition_error("build_sparse: need N >= 256");
  if (!(cfg.p0 >= 1.0 && cfg.p0 < 2.0)) throw precondition_error("build_sparse: need p0 in [1,2)");
  if (!(cfg.q0 > 2.0)) throw precondition_error("build_sparse: need q0 > 2");
  if (cfg.max_depth < 0) throw precondition_error("build_sparse: need max_depth >= 0");
  const int depth_cap = std::min(cfg.max_depth, g);

  SparseFamily fam;
  fam.grid_size = n;
  struct Node {
    DyadicInterval q;
    SampledFunction fq;
  };
  std::vector<Node> stack;
  stack.push_back({DyadicInterval{0, 0}, f});
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    const std::int64_t a = node.q.index * (n >> node.q.level);
    const std::int64_t cells = n >> node.q.level;
    SparseMember member;
    member.interval = node.q;
    member.witness.assign(static_cast<std::size_t>(n), 0);

    if (node.q.level >= depth_cap || cells < 2) {
      for (std::int64_t j = 0; j < cells; ++j) member.witness[static_cast<std::size_t>(a + j)] = 1;
      fam.truncated = true;
      fam.members.push_back(std::move(member));
      continue;
    }

    const auto maj = node_majorant(node.fq, node.q, cfg);
    const double ref = p_average(node.fq, dilate(node.q, 5.0), cfg.p0);
    double eta = cfg.eta;
    if (!(eta > 0.0)) eta = detail::calibrate_from(maj, node.q, ref, n, cfg.eta_rel_tol).eta;

    std::vector<std::uint8_t> emask(static_cast<std::size_t>(n), 0);
    for (std::int64_t j = 0; j < cells; ++j) {
      const auto jj = static_cast<std::size_t>(a + j);
      if (maj[jj] > eta * ref)
        emask[jj] = 1;
      else
        member.witness[jj] = 1;
    }
    fam.members.push_back(std::move(member));
    const auto cover = maximal_cover(emask, node.q);
    for (auto it = cover.rbegin(); it != cover.rend(); ++it)
      stack.push_back({*it, detail::mask_to(f, dilate(*it, 5.0))});
  }
  std::sort(fam.members.begin(), fam.members.end(), [](const SparseMember& x, const SparseMember& y) {
    return x.interval.level != y.interval.level ? x.interval.level < y.interval.level
                                                : x.interval.index < y.interval.index;
  });
  return fam;
}

// sum_P (avg_{lambda P} |f|^{p0})^{2/p0} (avg_{lambda P} |g|^{q0*})^{1/q0*} |P|
// with q0* = (q0/2)'.
inline double sparse_form(const SampledFunction& f, const SampledFunction& gfun,
                          const SparseFamily& fam, double p0, double q0, double lambda = 5.0) {
  if (!(q0 > 2.0))
    throw precondition_error("sparse_form: need q0 > 2, otherwise (q0/2)' is not a norm exponent");
  if (lambda != 1.0 && lambda != 5.0) throw precondition_error("sparse_form: lambda must be 1 or 5");
  if (f.size() != fam.grid_size || gfun.size() != fam.grid_size)
    throw precondition_error("sparse_form: grid size mismatch");
  const double q0s = conj(q0 / 2.0);
  std::vector<std::size_t> order(fam.members.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto &px = fam.members[x].interval, &py = fam.members[y].interval;
    return px.level != py.level ? px.level < py.level : px.index < py.index;
  });
  double sum = 0.0;
  for (std::size_t i : order) {
    const auto& p = fam.members[i].interval;
    const double fa = p_average(f, dilate(p, lambda), p0);
    const double ga = p_average(gfun, dilate(p, lambda), q0s);
    sum += fa * fa * ga * p.length();
  }
  return sum;
}

struct DominationReport {
  double lhs = 0.0;    // int (Sf)^2 g
  double rhs = 0.0;    // sparse form at lambda = 5
  double ratio = 0.0;  // lhs / rhs
  bool band_warning = false;
};

inline DominationReport domination_check(const SampledFunction& f, const SampledFunction& gfun,
                                         const SparseFamily& fam, const SparseBuildConfig& cfg) {
  const int n = fam.grid_size;
  if (f.size() != n || gfun.size() != n) throw precondition_error("domination_check: grid size mismatch");
  for (int j = 0; j < n; ++j)
    if (gfun[j] < 0.0) throw precondition_error("domination_check: g must be nonnegative");
  const auto sres = square_function(f, cfg.kind, cfg.grid);
  DominationReport rep;
  rep.band_warning = sres.band_warning;
  for (int j = 0; j < n; ++j) rep.lhs += sres.s[j] * sres.s[j] * gfun[j];
  rep.lhs /= n;
  rep.rhs = sparse_form(f, gfun, fam, cfg.p0, cfg.q0, 5.0);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs == 0.0 ? 0.0 : infinity);
  return rep;
}

struct WeakTypeReport {
  double constant = 0.0;  // empirical weak-(p,p) constant of Tf against f
  double level = 0.0;     // value of Tf attaining it
  std::vector<double> quantiles;  // deciles of Tf (11 values, min..max)
};

// sup_lambda lambda^p |{Tf > lambda}| / ||f||_p^p on the sample grid: scan the
// sorted values of Tf, lambda just below the i-th largest gives measure i/N.
inline WeakTypeReport weak_type_measure(const SampledFunction& tf, const SampledFunction& f,
                                        double p) {
  const int n = tf.size();
  if (f.size() != n) throw precondition_error("weak_type_measure: grid size mismatch");
  if (!(p >= 1.0) || std::isinf(p)) throw precondition_error("weak_type_measure: need finite p >= 1");
  double denom = 0.0;
  for (int j = 0; j < n; ++j) denom += std::pow(std::fabs(f[j]), p);
  denom /= n;
  if (denom == 0.0) throw precondition_error("weak_type_measure: zero input norm");
  std::vector<double> v = tf.samples;
  std::sort(v.begin(), v.end());
  WeakTypeReport rep;
  for (int i = 0; i < n; ++i) {
    const double val = v[static_cast<std::size_t>(n - 1 - i)];
    const double c = std::pow(val, p) * (i + 1) / n / denom;
    if (c > rep.constant) {
      rep.constant = c;
      rep.level = val;
    }
  }
  for (int k = 0; k <= 10; ++k)
    rep.quantiles.push_back(v[static_cast<std::size_t>((static_cast<std::int64_t>(k) * (n - 1)) / 10)]);
  return rep;
}

}  // namespace sparselab
