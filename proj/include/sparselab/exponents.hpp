// Exponent calculus for the sparse-domination laboratory: Holder conjugates,
// the star map s -> (s/2)', gamma(p), phi(p), the critical index, and the
// restricted-range extrapolation exponent beta.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sparselab {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// Precondition violations (bad exponents, divergent integrals, ...): exit code 2 territory.
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Internal consistency failures (identities that must hold by construction): exit code 3.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Holder conjugate s' = s/(s-1), with conj(1) = inf and conj(inf) = 1.
inline double conj(double s) {
  if (std::isinf(s)) return 1.0;
  if (s == 1.0) return infinity;
  if (!(s > 1.0)) throw precondition_error("conj: need s >= 1 or s = inf, got " + std::to_string(s));
  return s / (s - 1.0);
}

// star(s) = (s/2)' = s/(s-2); star(inf) = 1. Extended below 2 (negative values),
// used formally by the sharpness closed forms; consumers check integrability.
inline double star(double s) {
  if (std::isinf(s)) return 1.0;
  if (s == 2.0) throw precondition_error("star: s = 2 has no conjugate of s/2");
  return s / (s - 2.0);
}

// (q0/p)' with the total rule (q0/p)' = 1 when q0 = inf.
inline double conj_ratio(double q0, double p) {
  if (std::isinf(q0)) return 1.0;
  return conj(q0 / p);
}

// Critical index of the exponent function: 2 + p0 - 2 p0/q0 = 2 + p0/q0*.
// Checks the defining identity 1/(cp - p0) = (q0/cp)'/(2 q0*) before returning.
inline double critical_p(double p0, double q0) {
  if (!(p0 >= 1.0 && p0 < 2.0 && q0 > 2.0))
    throw precondition_error("critical_p: need 1 <= p0 < 2 < q0");
  const double q0s = star(q0);
  const double cp = 2.0 + p0 / q0s;  // = 2 + p0 - 2 p0/q0
  const double lhs = 1.0 / (cp - p0);
  const double rhs = conj_ratio(q0, cp) / (2.0 * q0s);
  if (std::fabs(lhs - rhs) > 1e-12 * std::max(1.0, std::fabs(lhs)))
    throw internal_error("critical_p: branch identity violated");
  return cp;
}

struct ExponentProfile {
  double p0;        // in [1,2)
  double q0;        // in (2,inf]
  double p;         // in (p0,q0)
  double p_prime;   // p'
  double q0_star;   // (q0/2)'
  double p_star;    // (p/2)'; NaN at p = 2 (only the sharpness module, p > 2, consumes it)
  double r;         // (q0/p)'
  double gamma;     // max(1/(p-p0), (q0/p)'/(2 q0*))
  double phi;       // (q0/p)'(p/p0 - 1) + 1
  double critical;  // the index where the two gamma branches meet
  double omega;     // (q0-p)/(p-p0); inf when q0 = inf
};

inline ExponentProfile make_profile(double p0, double q0, double p) {
  if (!(p0 >= 1.0 && p0 < 2.0)) throw precondition_error("profile: need p0 in [1,2)");
  if (!(q0 > 2.0)) throw precondition_error("profile: need q0 in (2,inf]");
  if (!(p > p0 && p < q0)) throw precondition_error("profile: need p in (p0,q0)");
  ExponentProfile e;
  e.p0 = p0;
  e.q0 = q0;
  e.p = p;
  e.p_prime = conj(p);
  e.q0_star = star(q0);
  e.p_star = (p == 2.0) ? std::numeric_limits<double>::quiet_NaN() : star(p);
  e.r = conj_ratio(q0, p);
  e.gamma = std::max(1.0 / (p - p0), e.r / (2.0 * e.q0_star));
  e.phi = e.r * (p / p0 - 1.0) + 1.0;
  e.critical = critical_p(p0, q0);
  e.omega = std::isinf(q0) ? infinity : (q0 - p) / (p - p0);
  return e;
}

// Extrapolation exponent beta(p,q) = max(1, (q0-p)(q-p0)/((q0-q)(p-p0))).
// The first factor (q0-p)/(q0-q) degenerates to 1 when q0 = inf.
inline double beta(double p, double q, double p0, double q0) {
  if (!(p > p0 && p < q0 && q > p0)) throw precondition_error("beta: need p,q in (p0,q0)");
  if (q == q0 || !(q < q0)) throw precondition_error("beta: q = q0 outside hypothesis");
  const double first = std::isinf(q0) ? 1.0 : (q0 - p) / (q0 - q);
  return std::max(1.0, first * (q - p0) / (p - p0));
}

// The two closed-form identities that make the section-7 integrals collapse.
// case 1: -p*/p0* + p/p0 - p p*/p0 + p* = 0; case 2: -p/q0 + p*/q0* - p p*/(2 q0*) + p/2 = 0.
inline double sharpness_identity_case1(double p0, double p) {
  const double ps = star(p), p0s = star(p0);
  return -ps / p0s + p / p0 - p * ps / p0 + ps;
}

inline double sharpness_identity_case2(double q0, double p) {
  const double ps = star(p), q0s = star(q0);
  const double p_over_q0 = std::isinf(q0) ? 0.0 : p / q0;
  return -p_over_q0 + ps / q0s - p * ps / (2.0 * q0s) + p / 2.0;
}

}  // namespace sparselab
