#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace lue {

// Sign and log-magnitude representation of a real value.
// sign == 0 means exactly zero and log_magnitude is ignored.
struct LogScaled {
    int sign = 0;
    double log_magnitude = 0.0;

    static LogScaled zero() { return {0, 0.0}; }
    static LogScaled one() { return {1, 0.0}; }

    static LogScaled from_double(double v) {
        if (v == 0.0) return zero();
        return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
    }
    static LogScaled from_log(double log_mag, int sign = 1) {
        return {sign, log_mag};
    }

    double to_double() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_magnitude);
    }

    bool is_zero() const { return sign == 0; }

    LogScaled operator*(const LogScaled& o) const {
        if (sign == 0 || o.sign == 0) return zero();
        return {sign * o.sign, log_magnitude + o.log_magnitude};
    }
    LogScaled operator/(const LogScaled& o) const {
        if (o.sign == 0) throw std::domain_error("LogScaled: division by zero");
        if (sign == 0) return zero();
        return {sign * o.sign, log_magnitude - o.log_magnitude};
    }
    LogScaled& operator*=(const LogScaled& o) { return *this = *this * o; }
    LogScaled& operator/=(const LogScaled& o) { return *this = *this / o; }

    // Addition stays in log space; the larger magnitude is factored out.
    LogScaled operator+(const LogScaled& o) const {
        if (sign == 0) return o;
        if (o.sign == 0) return *this;
        const LogScaled* big = this;
        const LogScaled* small = &o;
        if (o.log_magnitude > log_magnitude) std::swap(big, small);
        double r = std::exp(small->log_magnitude - big->log_magnitude) *
                   (small->sign * big->sign);
        double f = 1.0 + r;
        if (f == 0.0) return zero();
        return {f > 0.0 ? big->sign : -big->sign,
                big->log_magnitude + std::log(std::abs(f))};
    }
    LogScaled operator-(const LogScaled& o) const {
        return *this + LogScaled{-o.sign, o.log_magnitude};
    }

    LogScaled pow(double e) const {
        if (sign == 0) return zero();
        if (sign < 0) throw std::domain_error("LogScaled: pow of negative value");
        return {1, log_magnitude * e};
    }
};

inline double rel_diff(double x, double y) {
    double scale = std::max(std::abs(x), std::abs(y));
    if (scale == 0.0) return 0.0;
    return std::abs(x - y) / scale;
}

inline double rel_diff(const LogScaled& x, const LogScaled& y) {
    if (x.sign == 0 && y.sign == 0) return 0.0;
    if (x.sign == 0 || y.sign == 0) return 1.0;
    if (x.sign != y.sign) return 2.0;
    // |x/y - 1| computed in log space to survive huge magnitudes.
    double d = x.log_magnitude - y.log_magnitude;
    if (std::abs(d) > 1.0) return 1e300;
    return std::abs(std::expm1(d));
}

// Double-double arithmetic: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
// Error-free transforms follow Dekker and Knuth; products use fma.
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace detail {
inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}
inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}
inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}
} // namespace detail

inline dd operator+(const dd& a, const dd& b) {
    dd s = detail::two_sum(a.hi, b.hi);
    dd t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}
inline dd operator-(const dd& a) { return {-a.hi, -a.lo}; }
inline dd operator-(const dd& a, const dd& b) { return a + (-b); }
inline dd operator*(const dd& a, const dd& b) {
    dd p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}
inline dd operator/(const dd& a, const dd& b) {
    double q1 = a.hi / b.hi;
    dd r = a - b * dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * dd(q2);
    double q3 = r.hi / b.hi;
    dd q = detail::quick_two_sum(q1, q2);
    return q + dd(q3);
}
inline dd& operator+=(dd& a, const dd& b) { return a = a + b; }
inline dd& operator-=(dd& a, const dd& b) { return a = a - b; }
inline dd& operator*=(dd& a, const dd& b) { return a = a * b; }
inline dd& operator/=(dd& a, const dd& b) { return a = a / b; }

inline bool operator<(const dd& a, const dd& b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const dd& a, const dd& b) { return b < a; }
inline dd abs(const dd& a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline dd ldexp(const dd& a, int e) {
    return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)};
}

// log(hi + lo) assuming hi > 0; one Newton refinement of log(hi).
inline double log_abs(const dd& a) {
    dd x = abs(a);
    if (x.hi == 0.0) throw std::domain_error("dd: log of zero");
    double l = std::log(x.hi);
    return l + std::log1p(x.lo / x.hi);
}

} // namespace lue
