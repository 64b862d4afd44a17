// Muckenhoupt A_p and reverse-Holder RH_q characteristics over a scan family,
// with exact closed forms for power weights x^a on [0,1].
#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "sparselab/exponents.hpp"
#include "sparselab/lattice.hpp"

namespace sparselab {

struct PowerWeight {
  double a;  // x^a on [0,1], a > -1
};

struct GridWeight {
  SampledFunction w;  // strictly positive samples
};

using Weight = std::variant<PowerWeight, GridWeight>;

// avg over [0,b] of x^a dx = b^a/(a+1).
inline double power_avg(double a, double b) {
  if (!(b > 0.0)) throw precondition_error("power_avg: need b > 0");
  if (!(a > -1.0))
    throw precondition_error("power_avg: integral of x^" + std::to_string(a) + " diverges at 0");
  return std::pow(b, a) / (a + 1.0);
}

// avg over [l,r] of x^a dx, 0 <= l < r; l = 0 needs a > -1.
inline double power_avg_interval(double a, double l, double r) {
  if (!(r > l && l >= 0.0)) throw precondition_error("power_avg_interval: bad interval");
  if (l == 0.0) return power_avg(a, r);
  if (a == -1.0) return (std::log(r) - std::log(l)) / (r - l);
  return (std::pow(r, a + 1.0) - std::pow(l, a + 1.0)) / ((a + 1.0) * (r - l));
}

// Candidate intervals for characteristic suprema: dyadic up to max_depth,
// anchored [0, 2^-n], and the one-third-shifted lattice (shift 2^-n/3 per level,
// dropping the member that would leave [0,1]).
struct ScanFamily {
  std::vector<Interval> intervals;
};

inline ScanFamily make_scan_family(int max_depth = 12, bool shifted = true) {
  ScanFamily s;
  for (int n = 0; n <= max_depth; ++n) {
    const double len = std::ldexp(1.0, -n);
    for (std::int64_t k = 0; k < (std::int64_t{1} << n); ++k)
      s.intervals.push_back({k * len, (k + 1) * len});
    if (n > 0) s.intervals.push_back({0.0, len});  // anchored (n = 0 already is [0,1])
    if (shifted && n > 0) {
      const double off = len / 3.0;
      for (std::int64_t k = 0; k + 1 < (std::int64_t{1} << n); ++k)
        s.intervals.push_back({k * len + off, (k + 1) * len + off});
    }
  }
  return s;
}

// Anchored A_p quotient of x^a: independent of the interval [0,b].
inline double ap_anchored(double a, double p) {
  if (!(p > 1.0)) throw precondition_error("ap_anchored: need p > 1");
  if (!(a > -1.0)) throw precondition_error("ap_anchored: weight not integrable (a <= -1)");
  const double ad = a * (1.0 - conj(p));
  if (!(ad > -1.0))
    throw precondition_error("ap_anchored: dual weight x^" + std::to_string(ad) +
                             " not integrable (a(1-p') <= -1)");
  return 1.0 / ((a + 1.0) * std::pow(ad + 1.0, p - 1.0));
}

// Anchored RH_q quotient of x^a: (a+1)/(aq+1)^{1/q}; RH_1 is identically 1.
inline double rh_anchored(double a, double q) {
  if (q == 1.0) return 1.0;
  if (!(q > 1.0)) throw precondition_error("rh_anchored: need q >= 1");
  if (!(a > -1.0)) throw precondition_error("rh_anchored: weight not integrable");
  if (!(a * q > -1.0))
    throw precondition_error("rh_anchored: x^" + std::to_string(a * q) + " not integrable (aq <= -1)");
  return (a + 1.0) / std::pow(a * q + 1.0, 1.0 / q);
}

struct CharacteristicReport {
  double value = 0.0;
  Interval argmax{0.0, 1.0};
};

namespace detail {

inline double ap_quotient_power(double a, double ad, double p, const Interval& I) {
  if (I.lo <= 0.0) return 1.0 / ((a + 1.0) * std::pow(ad + 1.0, p - 1.0));
  const double m1 = power_avg_interval(a, I.lo, I.hi);
  const double m2 = power_avg_interval(ad, I.lo, I.hi);
  return m1 * std::pow(m2, p - 1.0);
}

inline double rh_quotient_power(double a, double q, const Interval& I) {
  const double num = std::pow(power_avg_interval(a * q, std::max(I.lo, 0.0), I.hi), 1.0 / q);
  return num / power_avg_interval(a, std::max(I.lo, 0.0), I.hi);
}

}  // namespace detail

inline CharacteristicReport ap_characteristic_report(const Weight& w, double p,
                                                     const ScanFamily& scan) {
  if (!(p > 1.0)) throw precondition_error("ap_characteristic: need p > 1");
  CharacteristicReport rep;
  if (const auto* pw = std::get_if<PowerWeight>(&w)) {
    const double a = pw->a;
    if (!(a > -1.0)) throw precondition_error("ap_characteristic: a <= -1");
    const double ad = a * (1.0 - conj(p));
    if (!(ad > -1.0))
      throw precondition_error("ap_characteristic: dual exponent a(1-p') = " + std::to_string(ad) +
                               " not integrable");
    for (const auto& I : scan.intervals) {
      const double q = detail::ap_quotient_power(a, ad, p, I);
      if (q > rep.value) rep = {q, I};
    }
    return rep;
  }
  const auto& gw = std::get<GridWeight>(w);
  const int n = gw.w.size();
  std::vector<double> wp(gw.w.samples), dualp(static_cast<std::size_t>(n));
  const double pd = 1.0 - conj(p);
  for (int j = 0; j < n; ++j) {
    if (!(gw.w[j] > 0.0)) throw precondition_error("ap_characteristic: nonpositive weight sample");
    dualp[j] = std::pow(gw.w[j], pd);
  }
  detail::CellPrefix psw(wp), psd(dualp);
  for (const auto& I : scan.intervals) {
    const auto [a, b] = detail::cell_range(I, n);
    const double cnt = static_cast<double>(b - a + 1);
    const double q = (psw.range_sum(a, b) / cnt) * std::pow(psd.range_sum(a, b) / cnt, p - 1.0);
    if (q > rep.value) rep = {q, I};
  }
  return rep;
}

inline double ap_characteristic(const Weight& w, double p, const ScanFamily& scan) {
  return ap_characteristic_report(w, p, scan).value;
}

inline CharacteristicReport rh_characteristic_report(const Weight& w, double q,
                                                     const ScanFamily& scan) {
  if (q == 1.0) return {1.0, {0.0, 1.0}};  // RH_1 convention: A_p intersect RH_1 = A_p
  if (!(q > 1.0)) throw precondition_error("rh_characteristic: need q >= 1");
  CharacteristicReport rep;
  if (const auto* pw = std::get_if<PowerWeight>(&w)) {
    const double a = pw->a;
    if (!(a > -1.0)) throw precondition_error("rh_characteristic: a <= -1");
    if (!(a * q > -1.0))
      throw precondition_error("rh_characteristic: aq = " + std::to_string(a * q) + " <= -1");
    for (const auto& I : scan.intervals) {
      const double v = detail::rh_quotient_power(a, q, I);
      if (v > rep.value) rep = {v, I};
    }
    return rep;
  }
  const auto& gw = std::get<GridWeight>(w);
  const int n = gw.w.size();
  std::vector<double> wq(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (!(gw.w[j] > 0.0)) throw precondition_error("rh_characteristic: nonpositive weight sample");
    wq[j] = std::pow(gw.w[j], q);
  }
  detail::CellPrefix psw(gw.w.samples), psq(wq);
  for (const auto& I : scan.intervals) {
    const auto [a, b] = detail::cell_range(I, n);
    const double cnt = static_cast<double>(b - a + 1);
    const double v = std::pow(psq.range_sum(a, b) / cnt, 1.0 / q) / (psw.range_sum(a, b) / cnt);
    if (v > rep.value) rep = {v, I};
  }
  return rep;
}

inline double rh_characteristic(const Weight& w, double q, const ScanFamily& scan) {
  return rh_characteristic_report(w, q, scan).value;
}

// w^{1-p'}, the A_{p'} dual of w.
inline Weight dual_weight(const Weight& w, double p) {
  const double e = 1.0 - conj(p);
  if (const auto* pw = std::get_if<PowerWeight>(&w)) {
    const double ad = pw->a * e;
    if (!(ad > -1.0)) throw precondition_error("dual_weight: dual exponent not integrable");
    return PowerWeight{ad};
  }
  const auto& gw = std::get<GridWeight>(w);
  GridWeight out{gw};
  for (auto& v : out.w.samples) v = std::pow(v, e);
  return out;
}

// Pointwise power w^s of a weight.
inline Weight weight_pow(const Weight& w, double s) {
  if (const auto* pw = std::get_if<PowerWeight>(&w)) return PowerWeight{pw->a * s};
  GridWeight out{std::get<GridWeight>(w)};
  for (auto& v : out.w.samples) v = std::pow(v, s);
  return out;
}

struct ClassProductReport {
  double lhs = 0.0;  // [w^{(q0/p)'}]_{A_phi(p)}
  double rhs = 0.0;  // ([w]_{A_{p/p0}} [w]_{RH_{(q0/p)'}})^{(q0/p)'}
  bool ok = false;
};

// The class-product inequality behind the weighted bound:
// [w^{(q0/p)'}]_{A_phi(p)} <= ([w]_{A_{p/p0}} [w]_{RH_{(q0/p)'}})^{(q0/p)'}.
inline ClassProductReport class_product_bound(const Weight& w, double p0, double q0, double p,
                                              const ScanFamily& scan, double tol = 1e-9) {
  if (!(p > p0 && p < q0)) throw precondition_error("class_product_bound: need p in (p0,q0)");
  const double r = conj_ratio(q0, p);
  const double phi = r * (p / p0 - 1.0) + 1.0;
  ClassProductReport rep;
  rep.lhs = ap_characteristic(weight_pow(w, r), phi, scan);
  rep.rhs = std::pow(ap_characteristic(w, p / p0, scan) * rh_characteristic(w, r, scan), r);
  rep.ok = rep.lhs <= rep.rhs * (1.0 + tol);
  return rep;
}

}  // namespace sparselab
