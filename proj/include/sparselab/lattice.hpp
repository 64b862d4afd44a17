// Dyadic lattice on Q0 = [0,1] with periodic closure: intervals, dilation,
// normalized L^p averages by midpoint quadrature, and sparse-family checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "sparselab/exponents.hpp"

namespace sparselab {

inline constexpr int kMaxDepth = 20;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};

struct DyadicInterval {
  int level = 0;       // n >= 0
  std::int64_t index = 0;  // k in [0, 2^n)
  double length() const { return std::ldexp(1.0, -level); }
  double left() const { return static_cast<double>(index) * length(); }
  double right() const { return static_cast<double>(index + 1) * length(); }
  double center() const { return (static_cast<double>(index) + 0.5) * length(); }
  Interval interval() const { return {left(), right()}; }
  bool contains(double x) const { return x >= left() && x < right(); }
  bool operator==(const DyadicInterval& o) const { return level == o.level && index == o.index; }
};

inline std::pair<DyadicInterval, DyadicInterval> children(const DyadicInterval& p,
                                                          int max_depth = kMaxDepth) {
  if (p.level >= max_depth)
    throw precondition_error("children: level overflow beyond max depth");
  return {{p.level + 1, 2 * p.index}, {p.level + 1, 2 * p.index + 1}};
}

inline DyadicInterval parent(const DyadicInterval& p) {
  if (p.level == 0) throw precondition_error("parent: root has no parent");
  return {p.level - 1, p.index / 2};
}

// Nested-or-disjoint test helper: does a contain b?
inline bool contains(const DyadicInterval& a, const DyadicInterval& b) {
  if (a.level > b.level) return false;
  return (b.index >> (b.level - a.level)) == a.index;
}

// lambda-dilate about the center. Unclipped by default; clipped to [0,1] on request.
inline Interval dilate(const DyadicInterval& p, double lambda, bool clip = false) {
  if (!(lambda >= 1.0)) throw precondition_error("dilate: need lambda >= 1");
  const double c = p.center(), h = 0.5 * lambda * p.length();
  Interval out{c - h, c + h};
  if (clip) {
    out.lo = std::max(out.lo, 0.0);
    out.hi = std::min(out.hi, 1.0);
  }
  return out;
}

// Real samples at cell centers x_j = (j + 1/2)/N of the periodic unit interval.
struct SampledFunction {
  std::vector<double> samples;
  int size() const { return static_cast<int>(samples.size()); }
  double x(int j) const { return (j + 0.5) / size(); }
  double& operator[](int j) { return samples[j]; }
  double operator[](int j) const { return samples[j]; }
};

inline SampledFunction constant_function(int n, double c) {
  return {std::vector<double>(static_cast<std::size_t>(n), c)};
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

namespace detail {

// Indices of grid cells whose centers lie in I, as an inclusive wrap-around
// range [j_lo, j_hi] of unreduced indices (reduce mod N to address samples).
// Intervals longer than 1 revisit cells; the periodic average is unaffected.
inline std::pair<std::int64_t, std::int64_t> cell_range(const Interval& I, int n) {
  if (!(I.hi > I.lo)) throw precondition_error("cell_range: empty interval");
  const auto j_lo = static_cast<std::int64_t>(std::ceil(I.lo * n - 0.5));
  const auto j_hi = static_cast<std::int64_t>(std::floor(I.hi * n - 0.5));
  if (j_hi < j_lo) throw precondition_error("cell_range: interval below grid resolution");
  return {j_lo, j_hi};
}

inline int wrap_index(std::int64_t j, int n) {
  std::int64_t r = j % n;
  if (r < 0) r += n;
  return static_cast<int>(r);
}

// Prefix sums over one period, for O(1) wrap-around range sums.
class CellPrefix {
 public:
  explicit CellPrefix(const std::vector<double>& v) : n_(static_cast<int>(v.size())), ps_(v.size() + 1, 0.0) {
    for (int j = 0; j < n_; ++j) ps_[j + 1] = ps_[j] + v[j];
  }
  // Sum over unreduced inclusive index range [a, b] with periodic wrap.
  double range_sum(std::int64_t a, std::int64_t b) const {
    const std::int64_t count = b - a + 1;
    const std::int64_t whole = count / n_;
    double s = static_cast<double>(whole) * ps_[n_];
    std::int64_t rem = count - whole * n_;
    if (rem > 0) {
      const int ja = wrap_index(a, n_);
      const int jb = ja + static_cast<int>(rem) - 1;
      if (jb < n_) {
        s += ps_[jb + 1] - ps_[ja];
      } else {
        s += (ps_[n_] - ps_[ja]) + ps_[jb - n_ + 1];
      }
    }
    return s;
  }
  double total() const { return ps_[n_]; }

 private:
  int n_;
  std::vector<double> ps_;
};

}  // namespace detail

// Normalized average (avg_I |f|^p)^{1/p} by midpoint rule; p = inf takes the max.
// I may extend beyond [0,1]; f is extended periodically.
inline double p_average(const SampledFunction& f, const Interval& I, double p) {
  if (!(p >= 1.0)) throw precondition_error("p_average: need p >= 1");
  const int n = f.size();
  const auto [j_lo, j_hi] = detail::cell_range(I, n);
  if (std::isinf(p)) {
    double m = 0.0;
    const std::int64_t span = std::min<std::int64_t>(j_hi - j_lo, n - 1);
    for (std::int64_t j = j_lo; j <= j_lo + span; ++j)
      m = std::max(m, std::fabs(f[detail::wrap_index(j, n)]));
    return m;
  }
  double s = 0.0;
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    const double a = std::fabs(f[detail::wrap_index(j, n)]);
    s += (p == 1.0) ? a : ((p == 2.0) ? a * a : std::pow(a, p));
  }
  const double mean = s / static_cast<double>(j_hi - j_lo + 1);
  return (p == 1.0) ? mean : ((p == 2.0) ? std::sqrt(mean) : std::pow(mean, 1.0 / p));
}

inline double p_average(const SampledFunction& f, const DyadicInterval& P, double p) {
  return p_average(f, P.interval(), p);
}

// One sparse-family member: the interval plus its witness as a full-grid cell mask.
struct SparseMember {
  DyadicInterval interval;
  std::vector<std::uint8_t> witness;  // size N, 1 where the cell belongs to F_P
};

struct SparseFamily {
  int grid_size = 0;
  std::vector<SparseMember> members;
  bool truncated = false;  // some branch hit the depth cap
};

struct SparsityReport {
  bool ok = false;
  double worst_ratio = 0.0;
  bool disjoint = false;
  std::vector<double> ratios;  // |F_P|/|P| per member, in member order
};

// Checks pairwise disjointness of witnesses and |F_P| > |P|/2 for every member.
inline SparsityReport verify_sparsity(const SparseFamily& s) {
  if (!is_power_of_two(s.grid_size)) throw precondition_error("verify_sparsity: bad grid size");
  const int n = s.grid_size;
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(n), 0);
  SparsityReport rep;
  rep.disjoint = true;
  rep.worst_ratio = 1.0;
  for (const auto& m : s.members) {
    if (static_cast<int>(m.witness.size()) != n)
      throw precondition_error("verify_sparsity: missing or malformed witness");
    const auto [j_lo, j_hi] = detail::cell_range(m.interval.interval(), n);
    const auto cells = j_hi - j_lo + 1;
    std::int64_t inside = 0;
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
      const int jj = detail::wrap_index(j, n);
      if (m.witness[jj]) {
        ++inside;
        if (covered[jj]) rep.disjoint = false;
        covered[jj] = 1;
      }
    }
    std::int64_t outside = 0;
    for (int j = 0; j < n; ++j) outside += m.witness[j];
    if (outside != inside) throw precondition_error("verify_sparsity: witness escapes its interval");
    const double ratio = static_cast<double>(inside) / static_cast<double>(cells);
    rep.ratios.push_back(ratio);
    rep.worst_ratio = std::min(rep.worst_ratio, ratio);
  }
  rep.ok = rep.disjoint && rep.worst_ratio > 0.5;
  return rep;
}

}  // namespace sparselab
