#pragma once

// Exponent algebra: Strichartz admissibility of (r, p, q, a), the r = 3
// exponents of the small-data result, the d = 3 numerology chain built on
// delta(p) = 1 - 3 p'/(q')^2 - 3 (1/q - 1/p), and the admissible set in the
// (q', p') plane.

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace kchemo {

struct ExponentQuadruple {
  Exponent r, p, q, a;
  int dimension = 3;
};

/// Harmonic mean HM(p, q) = 2 / (1/p + 1/q), as a reciprocal.
inline Exponent harmonic_mean(const Exponent& p, const Exponent& q) {
  return Exponent::from_inverse((p.inverse() + q.inverse()) * Rational(1, 2));
}

struct AdmissibilityReport {
  bool p_ge_q = false;
  bool scaling = false;        // 2/r = d (1/q - 1/p)
  bool scaling_below_one = false;  // d (1/q - 1/p) < 1
  bool harmonic = false;       // a = HM(p, q)
  bool a_le_two = false;       // HM(p, q) <= 2
  bool endpoint_r_infinite = false;  // p = q, r = infinity: not usable in time norms
  bool admissible = false;
  std::string failure;         // first failing condition, empty if admissible
};

inline AdmissibilityReport strichartz_admissible(const ExponentQuadruple& e) {
  if (e.dimension < 1) throw InvalidArgument("dimension must be positive");
  AdmissibilityReport r;
  const Rational gap = e.q.inverse() - e.p.inverse();  // 1/q - 1/p
  const Rational scaled = Rational(e.dimension) * gap;
  r.p_ge_q = gap >= Rational(0);
  r.scaling = Rational(2) * e.r.inverse() == scaled;
  r.scaling_below_one = scaled < Rational(1);
  r.harmonic = e.a == harmonic_mean(e.p, e.q);
  r.a_le_two = harmonic_mean(e.p, e.q).inverse() >= Rational(1, 2);
  r.endpoint_r_infinite = gap == Rational(0);
  if (!r.p_ge_q) r.failure = "p >= q";
  else if (!r.scaling) r.failure = "2/r = d(1/q - 1/p)";
  else if (!r.scaling_below_one) r.failure = "d(1/q - 1/p) < 1";
  else if (!r.harmonic) r.failure = "a = HM(p,q)";
  else if (!r.a_le_two) r.failure = "HM(p,q) <= 2";
  r.admissible = r.failure.empty();
  return r;
}

/// r = 3, 1/p = 1/a - 1/9, 1/q = 1/a + 1/9 (d = 3), for a in [3/2, 2].
inline ExponentQuadruple theorem3_exponents(const Rational& a) {
  if (a < Rational(3, 2) || a > Rational(2)) throw InvalidArgument("a must lie in [3/2, 2], got " + a.str());
  const Rational ia = Rational(1) / a;
  ExponentQuadruple e;
  e.dimension = 3;
  e.r = Exponent(Rational(3));
  e.p = Exponent::from_inverse(ia - Rational(1, 9));
  e.q = Exponent::from_inverse(ia + Rational(1, 9));
  e.a = Exponent(a);
  return e;
}

// ---------------------------------------------------------------------------
// d = 3 numerology.

/// delta(p; q) in floating point.
inline double numerology_delta(double p, double q) {
  const double pc = p / (p - 1.0), qc = q / (q - 1.0);
  return 1.0 - 3.0 * pc / (qc * qc) - 3.0 * (1.0 / q - 1.0 / p);
}

/// delta(p; q) exactly.
inline Rational numerology_delta(const Rational& p, const Rational& q) {
  const Rational one(1);
  const Rational pc = Exponent(p).conjugate().value();
  const Rational qc = Exponent(q).conjugate().value();
  return one - Rational(3) * pc / (qc * qc) - Rational(3) * (one / q - one / p);
}

template <class T>
struct NumerologyValues {
  T q, p, lambda, theta, c, b, eps_interp;
};

/// lambda = 3(1/q - 1/p), theta = p'/q', 1/c = 1 - theta/q', 1/b = 5/3 - 1/c, eps = p'/b'.
inline NumerologyValues<double> numerology_chain(double p, double q) {
  NumerologyValues<double> v;
  v.q = q;
  v.p = p;
  const double pc = p / (p - 1.0), qc = q / (q - 1.0);
  v.lambda = 3.0 * (1.0 / q - 1.0 / p);
  v.theta = pc / qc;
  v.c = 1.0 / (1.0 - v.theta / qc);
  v.b = 1.0 / (5.0 / 3.0 - 1.0 / v.c);
  const double bc = v.b / (v.b - 1.0);
  v.eps_interp = pc / bc;
  return v;
}

inline NumerologyValues<Rational> numerology_chain(const Rational& p, const Rational& q) {
  const Rational one(1);
  NumerologyValues<Rational> v;
  v.q = q;
  v.p = p;
  const Rational pc = Exponent(p).conjugate().value();
  const Rational qc = Exponent(q).conjugate().value();
  v.lambda = Rational(3) * (one / q - one / p);
  v.theta = pc / qc;
  v.c = one / (one - v.theta / qc);
  v.b = one / (Rational(5, 3) - one / v.c);
  v.eps_interp = pc / Exponent(v.b).conjugate().value();
  return v;
}

struct NumerologyChain {
  NumerologyValues<double> values;
  double delta_at_solution = 0.0;
  double delta_low = 0.0;   // delta(3/2)
  double delta_high = 0.0;  // delta(3)
  bool invariants_hold = false;
  std::string failure;
};

/// Solves delta(p; q) = 0 for p in (3/2, 3) by bisection to 1e-12 and derives the chain.
inline NumerologyChain solve_numerology(double q) {
  if (!(q > 1.0 && q < 1.5)) throw InvalidArgument("q must lie in (1, 3/2)");
  NumerologyChain ch;
  ch.delta_low = numerology_delta(1.5, q);
  ch.delta_high = numerology_delta(3.0, q);
  if (!(ch.delta_low > 0.0 && ch.delta_high < 0.0))
    throw InvalidArgument("bisection bracket failed: delta(3/2) = " + std::to_string(ch.delta_low) +
                          ", delta(3) = " + std::to_string(ch.delta_high));
  double lo = 1.5, hi = 3.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (numerology_delta(mid, q) > 0.0 ? lo : hi) = mid;
  }
  const double p = 0.5 * (lo + hi);
  ch.values = numerology_chain(p, q);
  ch.delta_at_solution = numerology_delta(p, q);
  const auto& v = ch.values;
  const double cc = v.c / (v.c - 1.0);
  if (!(v.theta > 0 && v.theta < 1)) ch.failure = "theta in (0,1)";
  else if (!(v.eps_interp > 0 && v.eps_interp < 1)) ch.failure = "eps_interp in (0,1)";
  else if (!(1.0 < v.c && v.c < q)) ch.failure = "1 < c < q";
  else if (!(1.0 < v.b && v.b < std::min(cc, p))) ch.failure = "1 < b < min(c', p)";
  else if (!(v.lambda < 1.0)) ch.failure = "lambda < 1";
  else if (!(std::abs(v.eps_interp + v.theta - 1.0) <= 1e-12)) ch.failure = "eps_interp + theta = 1";
  ch.invariants_hold = ch.failure.empty();
  return ch;
}

// ---------------------------------------------------------------------------
// Admissible set in the (q', p') plane:
//   q' > p',  3(1/q - 1/p) + 3 p'/(q')^2 <= 1,  1/q - 1/p < 1/3,
// with 1/q - 1/p = 1/p' - 1/q'.

inline bool in_admissible_region(const Rational& qc, const Rational& pc) {
  if (qc < Rational(1) || pc < Rational(1)) throw InvalidArgument("conjugate exponents must be >= 1");
  const Rational one(1);
  const Rational gap = one / pc - one / qc;
  return qc > pc && Rational(3) * gap + Rational(3) * pc / (qc * qc) <= one && gap < Rational(1, 3);
}

struct RegionPoint {
  Rational q_prime, p_prime;
  bool inside = false;
};

/// Rasterises [lo, hi]^2 in (q', p') with the given rational step.
inline std::vector<RegionPoint> admissible_region(const Rational& step, const Rational& lo = Rational(1),
                                                  const Rational& hi = Rational(10)) {
  if (step <= Rational(0)) throw InvalidArgument("step must be positive");
  if (lo < Rational(1) || hi < lo) throw InvalidArgument("region bounds must satisfy 1 <= lo <= hi");
  std::vector<RegionPoint> pts;
  for (Rational x = lo; x <= hi; x += step)
    for (Rational y = lo; y <= hi; y += step) pts.push_back({x, y, in_admissible_region(x, y)});
  return pts;
}

inline void write_region_csv(std::ostream& os, const std::vector<RegionPoint>& pts) {
  os << "q_prime,p_prime,in_region\n";
  for (const auto& p : pts) os << p.q_prime.str() << ',' << p.p_prime.str() << ',' << (p.inside ? 1 : 0) << '\n';
}

}  // namespace kchemo
