// Extremal power-law pairs on the anchored sparse family {[0, 2^-n]}: exact
// closed forms for both sides of the domination inequality and log-log slope
// fits, used to confirm that the exponent 2 gamma(p) cannot be lowered.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sparselab/exponents.hpp"
#include "sparselab/weights.hpp"

namespace sparselab {

enum class SharpnessCase { low, high };

// low:  2 < p <= critical, the 1/(p-p0) branch of gamma is active;
// high: critical <= p < q0, the (q0/p)'/(2 q0*) branch is active.
inline SharpnessCase sharpness_case(double p0, double q0, double p) {
  const auto prof = make_profile(p0, q0, p);
  if (!(p > 2.0)) throw precondition_error("sharpness: extremal pairs need p > 2");
  return p <= prof.critical ? SharpnessCase::low : SharpnessCase::high;
}

// Largest usable eps: half the distance to the nearest integrability failure
// of the construction (weight, dual weight, or reverse-Holder power), capped.
inline double eps_max(double p0, double q0, double p) {
  const SharpnessCase which = sharpness_case(p0, q0, p);
  const double P = p / p0, r = conj_ratio(q0, p);
  double bound;
  if (which == SharpnessCase::low) {
    bound = std::min(P, (P - 1.0) + 1.0 / r);
  } else {
    const double ps = star(p), q0s = star(q0);
    bound = std::min(ps / q0s, (1.0 / r + (P - 1.0)) / (0.5 * p - 1.0));
  }
  return std::min(0.25, 0.5 * bound);
}

struct SharpnessExponents {
  SharpnessCase which;
  double ef, eg, ew, es;  // f = x^ef, g = x^eg, w = x^ew, sigma = x^es
};

inline SharpnessExponents sharpness_exponents(double p0, double q0, double p, double eps) {
  const SharpnessCase which = sharpness_case(p0, q0, p);
  if (!(eps > 0.0 && eps <= eps_max(p0, q0, p)))
    throw precondition_error("sharpness: eps outside (0, eps_max]");
  const double ps = star(p), p0s = star(p0), q0s = star(q0);
  SharpnessExponents e;
  e.which = which;
  if (which == SharpnessCase::low) {
    e.ef = -1.0 / p0 + eps;
    e.eg = -1.0 / p0s + eps;  // p0* < 0 for p0 < 2, so this decays at 0
    e.ew = p / p0 - 1.0 - eps;
    e.es = e.ew * (1.0 - ps);
  } else {
    e.ef = (std::isinf(q0) ? 0.0 : -1.0 / q0) + eps;
    e.eg = -1.0 / q0s + eps;
    e.es = ps / q0s - 1.0 - eps;
    e.ew = e.es * (1.0 - 0.5 * p);
  }
  return e;
}

// Single term of the sparse form at I_n = [0, 2^-n], straight from the
// power-average closed forms (no collapsed exponents).
inline double sharpness_term(double p0, double q0, double p, double eps, int n) {
  if (n < 0) throw precondition_error("sharpness_term: need n >= 0");
  const auto e = sharpness_exponents(p0, q0, p, eps);
  const double q0s = star(q0);
  const double b = std::ldexp(1.0, -n);
  return std::pow(power_avg(p0 * e.ef, b), 2.0 / p0) *
         std::pow(power_avg(q0s * e.eg, b), 1.0 / q0s) * b;
}

struct LhsReport {
  double value = 0.0;
  double prefactor = 0.0;  // A(eps): term_n = A(eps) 2^{-3 n eps}
  int terms = 0;           // number of anchored intervals summed
};

// Sum of the sparse form over n = 0 .. ceil(10/eps): the terms are exactly
// geometric with ratio 2^{-3 eps}, so the truncation error is below 2^{-30}
// relative.
inline LhsReport lhs_exact(double p0, double q0, double p, double eps) {
  const auto e = sharpness_exponents(p0, q0, p, eps);
  const double q0s = star(q0);
  if (std::fabs(2.0 * e.ef + e.eg + 1.0 - 3.0 * eps) > 1e-12)
    throw internal_error("lhs_exact: term exponent did not collapse to 3 eps");
  LhsReport rep;
  rep.prefactor =
      std::pow(p0 * e.ef + 1.0, -2.0 / p0) * std::pow(q0s * e.eg + 1.0, -1.0 / q0s);
  rep.terms = static_cast<int>(std::ceil(10.0 / eps)) + 1;
  const double rho = std::exp2(-3.0 * eps);
  const double one_minus_rho = -std::expm1(-3.0 * eps * M_LN2);
  rep.value = rep.prefactor * (1.0 - std::pow(rho, rep.terms)) / one_minus_rho;
  return rep;
}

struct SharpnessPoint {
  double eps = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs
  double a_char = 0.0;
  double rh_char = 0.0;
  double f_norm = 0.0;
  double g_norm = 0.0;
};

// (A RH)^{2 gamma} ||f||^2_{L^p(w)} ||g||_{L^{(p/2)'}(sigma)}. The weighted
// norms have exact values 1/(c eps)^{1/p}: the exponent sums collapse through
// the same identities the characteristics are built on, and we assert that.
inline SharpnessPoint rhs_exact(double p0, double q0, double p, double eps, bool anchored = true,
                                const ScanFamily* scan = nullptr) {
  const auto e = sharpness_exponents(p0, q0, p, eps);
  const double P = p / p0, r = conj_ratio(q0, p), ps = star(p), q0s = star(q0);
  const double gamma = std::max(1.0 / (p - p0), r / (2.0 * q0s));
  const double f_rate = e.which == SharpnessCase::low ? (p - 1.0) : (1.5 * p - 1.0);
  const double g_rate = e.which == SharpnessCase::low ? (2.0 * ps - 1.0) : (ps - 1.0);
  const double e1 = p * e.ef + e.ew, e2 = ps * e.eg + e.es;
  if (std::fabs(e1 + 1.0 - f_rate * eps) > 1e-12 * std::max(1.0, std::fabs(ps * p)) ||
      std::fabs(e2 + 1.0 - g_rate * eps) > 1e-12 * std::max(1.0, std::fabs(ps * p)))
    throw internal_error("rhs_exact: norm exponents do not reconstruct the closed form");
  SharpnessPoint pt;
  pt.eps = eps;
  pt.f_norm = std::pow(e1 + 1.0, -1.0 / p);
  pt.g_norm = std::pow(e2 + 1.0, -1.0 / ps);
  if (anchored) {
    pt.a_char = ap_anchored(e.ew, P);
    pt.rh_char = rh_anchored(e.ew, r);
  } else {
    if (scan == nullptr) throw precondition_error("rhs_exact: scan family required");
    pt.a_char = ap_characteristic(PowerWeight{e.ew}, P, *scan);
    pt.rh_char = rh_characteristic(PowerWeight{e.ew}, r, *scan);
  }
  pt.rhs = std::pow(pt.a_char * pt.rh_char, 2.0 * gamma) * pt.f_norm * pt.f_norm * pt.g_norm;
  return pt;
}

inline SharpnessPoint sharpness_point(double p0, double q0, double p, double eps,
                                      bool anchored = true, const ScanFamily* scan = nullptr) {
  SharpnessPoint pt = rhs_exact(p0, q0, p, eps, anchored, scan);
  pt.lhs = lhs_exact(p0, q0, p, eps).value;
  pt.ratio = pt.lhs / pt.rhs;
  return pt;
}

// Both sides diverge like eps^target with the same exponent.
inline double target_slope(double p0, double q0, double p) {
  return sharpness_case(p0, q0, p) == SharpnessCase::low ? -(1.0 + 2.0 / p0)
                                                         : -(1.0 + 1.0 / star(q0));
}

// Least-squares slope of log y against log x.
inline double slope_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw precondition_error("slope_fit: need at least 2 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0 && ys[i] > 0.0)) throw precondition_error("slope_fit: need positive data");
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw precondition_error("slope_fit: degenerate abscissas");
  return (n * sxy - sx * sy) / denom;
}

inline std::vector<double> eps_ladder(int coarse = 6, int fine = 14) {
  if (!(0 < coarse && coarse < fine)) throw precondition_error("eps_ladder: need 0 < coarse < fine");
  std::vector<double> v;
  for (int k = coarse; k <= fine; ++k) v.push_back(std::ldexp(1.0, -k));
  return v;
}

struct SweepReport {
  std::vector<SharpnessPoint> points;
  double lhs_slope = 0.0;
  double rhs_slope = 0.0;
  double target = 0.0;
  double ratio_drift = 0.0;  // relative spread of lhs/rhs over the last three eps
  bool consistent = false;   // slopes agree to 0.1 and the ratio has stabilized
};

inline SweepReport sharpness_sweep(double p0, double q0, double p, const std::vector<double>& eps,
                                   bool anchored = true, const ScanFamily* scan = nullptr) {
  if (eps.size() < 2) throw precondition_error("sharpness_sweep: need at least 2 eps values");
  SweepReport rep;
  std::vector<double> ls, rs;
  for (double e : eps) {
    rep.points.push_back(sharpness_point(p0, q0, p, e, anchored, scan));
    ls.push_back(rep.points.back().lhs);
    rs.push_back(rep.points.back().rhs);
  }
  rep.lhs_slope = slope_fit(eps, ls);
  rep.rhs_slope = slope_fit(eps, rs);
  rep.target = target_slope(p0, q0, p);
  const std::size_t k = std::min<std::size_t>(3, rep.points.size());
  double lo = infinity, hi = 0.0;
  for (std::size_t i = rep.points.size() - k; i < rep.points.size(); ++i) {
    lo = std::min(lo, rep.points[i].ratio);
    hi = std::max(hi, rep.points[i].ratio);
  }
  rep.ratio_drift = hi > 0.0 ? (hi - lo) / hi : 0.0;
  rep.consistent = std::fabs(rep.lhs_slope - rep.rhs_slope) <= 0.1 && rep.ratio_drift < 0.2;
  return rep;
}

}  // namespace sparselab
