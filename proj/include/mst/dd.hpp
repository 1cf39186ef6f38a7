#pragma once

#include <cmath>

// Minimal double-double (compensated) arithmetic. Used for the final
// polishing step of the root finder at large m and for the recurrence
// accumulators, where plain binary64 summation would lose the low bits.

namespace mst {

struct DD {
  double hi = 0.0;
  double lo = 0.0;

  DD() = default;
  constexpr DD(double h, double l) : hi(h), lo(l) {}
  constexpr explicit DD(double h) : hi(h), lo(0.0) {}

  double value() const { return hi + lo; }
};

namespace dd_detail {

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline DD quick_two_sum(double a, double b) {
  // requires |a| >= |b|
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DD dd_add(DD a, DD b) {
  DD s = dd_detail::two_sum(a.hi, b.hi);
  DD t = dd_detail::two_sum(a.lo, b.lo);
  double lo = s.lo + t.hi;
  DD r = dd_detail::quick_two_sum(s.hi, lo);
  lo = r.lo + t.lo;
  return dd_detail::quick_two_sum(r.hi, lo);
}

inline DD dd_add(DD a, double b) { return dd_add(a, DD(b)); }

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

inline DD dd_sub(DD a, DD b) { return dd_add(a, dd_neg(b)); }

inline DD dd_mul(DD a, DD b) {
  DD p = dd_detail::two_prod(a.hi, b.hi);
  double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, lo);
}

inline DD dd_mul(DD a, double b) {
  DD p = dd_detail::two_prod(a.hi, b);
  double lo = p.lo + a.lo * b;
  return dd_detail::quick_two_sum(p.hi, lo);
}

inline DD dd_div(DD a, DD b) {
  double q1 = a.hi / b.hi;
  DD r = dd_sub(a, dd_mul(b, q1));
  double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul(b, q2));
  double q3 = r.hi / b.hi;
  DD q = dd_detail::quick_two_sum(q1, q2);
  return dd_add(q, DD(q3));
}

inline DD dd_div(DD a, double b) { return dd_div(a, DD(b)); }

// Complex double-double, component-wise representation.
struct CDD {
  DD re, im;

  CDD() = default;
  CDD(DD r, DD i) : re(r), im(i) {}
  explicit CDD(double r, double i = 0.0) : re(r), im(i) {}
};

inline CDD cdd_add(CDD a, CDD b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }

inline CDD cdd_sub(CDD a, CDD b) { return {dd_sub(a.re, b.re), dd_sub(a.im, b.im)}; }

inline CDD cdd_mul(CDD a, CDD b) {
  DD re = dd_sub(dd_mul(a.re, b.re), dd_mul(a.im, b.im));
  DD im = dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re));
  return {re, im};
}

inline CDD cdd_mul(CDD a, double b) { return {dd_mul(a.re, b), dd_mul(a.im, b)}; }

inline CDD cdd_div(CDD a, CDD b) {
  DD den = dd_add(dd_mul(b.re, b.re), dd_mul(b.im, b.im));
  DD re = dd_add(dd_mul(a.re, b.re), dd_mul(a.im, b.im));
  DD im = dd_sub(dd_mul(a.im, b.re), dd_mul(a.re, b.im));
  return {dd_div(re, den), dd_div(im, den)};
}

inline CDD cdd_div(CDD a, double b) { return {dd_div(a.re, b), dd_div(a.im, b)}; }

inline CDD cdd_recip(CDD b) { return cdd_div(CDD(1.0, 0.0), b); }

}  // namespace mst
