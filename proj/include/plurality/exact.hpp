#pragma once

// Exact sign predicates over double inputs. Every double is a dyadic rational,
// so evaluating in arbitrary precision rationals gives the true sign.

#include <boost/multiprecision/cpp_int.hpp>

namespace plurality::exact {

using Rational = boost::multiprecision::cpp_rational;

inline int sign(const Rational& r) { return r.sign(); }

/// Sign of det[[bx-ax, by-ay],[cx-ax, cy-ay]].
inline int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
    const double l = (bx - ax) * (cy - ay), r = (by - ay) * (cx - ax);
    const double det = l - r;
    const double bound = 1e-14 * (std::abs(l) + std::abs(r));
    if (det > bound) return 1;
    if (det < -bound) return -1;
    const Rational e = (Rational(bx) - ax) * (Rational(cy) - ay) - (Rational(by) - ay) * (Rational(cx) - ax);
    return sign(e);
}

/// Sign of ax*bx + ay*by.
inline int dot_sign(double ax, double ay, double bx, double by) {
    const Rational e = Rational(ax) * bx + Rational(ay) * by;
    return sign(e);
}

/// Sign of |p - a|^2 - |p - b|^2 in any dimension.
template <class Span>
int compare_squared_distance(const Span& p, const Span& a, const Span& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Rational da = Rational(p[i]) - a[i];
        const Rational db = Rational(p[i]) - b[i];
        s += da * da - db * db;
    }
    return sign(s);
}

}  // namespace plurality::exact
