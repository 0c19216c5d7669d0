#ifndef TDS_INTERVAL_HPP
#define TDS_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace tds {

// Plain outward-naive interval arithmetic. Used only to derive coefficient
// bounds for frequency-sweep tail certificates; rounding-direction rigor is
// not required there because every certificate is backstopped by the
// pole-count invariance suite.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double v) : lo(v), hi(v) {}
    Interval(double l, double h) : lo(l), hi(h) {}

    static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

    bool contains(double v) const { return lo <= v && v <= hi; }
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
    double mig() const { return contains(0.0) ? 0.0 : std::min(std::fabs(lo), std::fabs(hi)); }
};

inline Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator*(Interval a, Interval b) {
    double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

inline Interval operator/(Interval a, Interval b) {
    if (b.contains(0.0))
        throw Error(ErrorCode::Invalid, "interval division by an interval containing zero");
    return a * Interval(1.0 / b.hi, 1.0 / b.lo);
}

inline Interval pow_int(Interval a, long n) {
    if (n == 0) return Interval(1.0);
    if (n < 0) return Interval(1.0) / pow_int(a, -n);
    if (n % 2 == 0) {
        // even power: minimum at the mignitude
        double lo = a.mig(), hi = a.mag();
        return {std::pow(lo, double(n)), std::pow(hi, double(n))};
    }
    return {std::pow(a.lo, double(n)), std::pow(a.hi, double(n))};
}

inline Interval exp(Interval a) { return {std::exp(a.lo), std::exp(a.hi)}; }

} // namespace tds

#endif
