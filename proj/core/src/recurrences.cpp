#include <lue/recurrences.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <lue/hankel.hpp>
#include <lue/linalg.hpp>
#include <lue/specfun.hpp>

namespace lue {

namespace {

constexpr double kDenFloor = 1e-8;

void check_window(const SequenceWindow& w, ShiftLabel want, size_t need) {
    if (w.label != want)
        throw std::invalid_argument("recurrences: window label does not match the equation");
    if (w.values.size() < need)
        throw std::invalid_argument("recurrences: window holds too few values");
    for (size_t i = 1; i < w.values.size(); ++i)
        if (w.values[i].first != w.values[i - 1].first + 1)
            throw std::invalid_argument("recurrences: window indices must be consecutive");
}

double guarded(double den) {
    if (std::abs(den) < kDenFloor)
        throw std::domain_error("recurrences: difference-equation denominator degenerate");
    return den;
}

double relative_residual(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

// Both quotient factors of a shift equation, each evaluated as printed.
// x stands for the value one shift above the window.
struct QuotientParts {
    double lhs = 0.0;
    std::function<double(double)> num1, den1;
    double num2 = 0.0, den2 = 0.0;
};

double quotient_residual(const QuotientParts& q, double x) {
    double rhs = (q.num1(x) / guarded(q.den1(x))) * (q.num2 / guarded(q.den2));
    return relative_residual(q.lhs, rhs);
}

// The equation lhs = (num1/den1)(num2/den2) is affine in x once den1 is
// cleared, so two evaluations of g(x) = lhs den1(x) den2 - num1(x) num2
// pin the root exactly.
double quotient_step(const QuotientParts& q, const char* label) {
    guarded(q.den2);
    auto g = [&](double x) { return q.lhs * q.den1(x) * q.den2 - q.num1(x) * q.num2; };
    double g0 = g(0.0);
    double slope = g(1.0) - g0;
    if (std::abs(slope) < kDenFloor)
        throw std::domain_error("recurrences: step target drops out of the equation");
    double x = -g0 / slope;
    guarded(q.den1(x));
    if (quotient_residual(q, x) > 1e-6)
        throw std::runtime_error(std::string("recurrences: propagated ") + label +
                                 " value fails the source equation");
    return x;
}

QuotientParts pv_a_parts(double n, double a, double mu, double t,
                         double um, double u, double up) {
    QuotientParts q;
    q.lhs = -t * (up - u);
    q.num1 = [=](double x) {
        return (x - u + a + mu + 1.0) * (n * (mu + t) + (a + 1.0) * u - a * up) +
               (a + 1.0) * t * (x - up - n);
    };
    q.den1 = [=](double x) {
        return n * (a + mu + 1.0 + t) + up - (a + 1.0) * (x - u);
    };
    q.num2 = (up - um + a + mu) * (n * mu + (n + a + mu + 1.0) * u - (n + a + mu) * up) +
             t * (mu * n - mu * up + (n + a + mu) * u - (n + a) * um);
    q.den2 = -mu * (a + mu + t) + u - (n + a + mu) * (up - um);
    return q;
}

QuotientParts pv_mu_parts(double n, double a, double mu, double t,
                          double ul, double u, double ur) {
    QuotientParts q;
    q.lhs = -t * (u - ur);
    q.num1 = [=](double x) {
        return (x - u + 2.0 * n + a + mu + 1.0) *
                   (-n * (n + a) + (n + mu + 1.0) * u - (n + mu) * ur) -
               t * (-n * (n + a) + (mu + 1.0) * x - (n + mu + 1.0) * ur + n * u);
    };
    q.den1 = [=](double x) {
        return -n * (2.0 * n + a + mu + 1.0 - t) + ur - (n + mu + 1.0) * (x - u);
    };
    q.num2 = (ur - ul + 2.0 * n + a + mu) *
                 (-n * (n + a) + (n + a + mu + 1.0) * u - (n + a + mu) * ur) -
             t * (-n * (n + a) - mu * ul + (n + a + mu) * u - (n + a) * ur);
    q.den2 = -(n + a) * (2.0 * n + a + mu - t) + u - (n + a + mu) * (ur - ul);
    return q;
}

}  // namespace

double toda_residual(const std::function<LogScaled(int, double)>& tau_bar,
                     int n, double t, double h) {
    if (n < 1)
        throw std::domain_error("toda_residual: defined for n >= 1");
    if (!(t > 0.0) || !(h > 0.0))
        throw std::domain_error("toda_residual: requires t > 0 and h > 0");

    const double u0 = std::log(t);
    const double offsets[5] = {-h, -0.5 * h, 0.0, 0.5 * h, h};
    double f[5];
    int sign = 0;
    for (int i = 0; i < 5; ++i) {
        LogScaled v = tau_bar(n, std::exp(u0 + offsets[i]));
        if (v.sign == 0)
            throw std::domain_error("toda_residual: tau vanishes on the stencil");
        if (sign == 0) sign = v.sign;
        if (v.sign != sign)
            throw std::domain_error("toda_residual: tau changes sign across the stencil");
        f[i] = v.log_magnitude;
    }
    double d_h = (f[4] - 2.0 * f[2] + f[0]) / (h * h);
    double d_half = (f[3] - 2.0 * f[2] + f[1]) / (0.25 * h * h);
    double lhs = (4.0 * d_half - d_h) / 3.0;

    LogScaled center = LogScaled::from_log(f[2], sign);
    LogScaled ratio = tau_bar(n - 1, t) * tau_bar(n + 1, t) / (center * center);
    double rhs = ratio.to_double();
    return relative_residual(lhs, rhs);
}

LogScaled toda_pv_tau_bar(double abar, double mu, int n, double t) {
    if (n < 0) return LogScaled::zero();
    if (n == 0) return LogScaled::one();
    if (!(t > 0.0))
        throw std::domain_error("toda_pv_tau_bar: requires t > 0");
    if (!(mu >= 0.0))
        throw std::domain_error("toda_pv_tau_bar: requires mu >= 0");
    const double an = abar - n;
    if (!(an > -1.0))
        throw std::domain_error("toda_pv_tau_bar: chain member needs abar - n > -1");

    LueParams p;
    p.N = n;
    p.a = an;
    p.mu = mu;
    LogScaled etil = etilde_sinf_det(p, t);

    // t -> 0 constant of the exact chain member, from the leading term of
    // the underlying moment determinant.
    double log_t_n = 0.0;
    for (int m = 1; m < n; ++m) log_t_n += 2.0 * ln_gamma(m + 1.0);
    for (int r = 0; r < n; ++r)
        log_t_n += ln_gamma(mu + 1.0 + r) - ln_gamma(mu + 1.0) -
                   ln_gamma(abar + mu + 1.0 + r) + ln_gamma(abar + mu + 1.0) -
                   ln_gamma(r + 1.0);
    LogScaled e_n = jacobi_norm(n, an, mu) / laguerre_norm(n, an);

    const double nn = n;
    double expo = -0.5 * nn * nn - (an + mu) * nn;
    return LogScaled::from_log(expo * std::log(t) + nn * t + log_t_n) * etil / e_n;
}

LogScaled toda_piii_tau_bar(double nu, int n, double t) {
    if (n < 0) return LogScaled::zero();
    if (n == 0) return LogScaled::one();
    if (!(t > 0.0))
        throw std::domain_error("toda_piii_tau_bar: requires t > 0");

    const double rt = std::sqrt(t);
    std::vector<LogScaled> entry(static_cast<size_t>(n) * n);
    double top = -1e300;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            LogScaled e = bessel_I(j - k + nu, rt);
            entry[static_cast<size_t>(j) * n + k] = e;
            if (e.sign != 0) top = std::max(top, e.log_magnitude);
        }
    Mat<double> m(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const LogScaled& e = entry[static_cast<size_t>(j) * n + k];
            m(j, k) = e.sign == 0 ? 0.0 : e.sign * std::exp(e.log_magnitude - top);
        }
    LogScaled det = log_det(m) * LogScaled::from_log(n * top);

    double expo = -0.5 * n * (nu - 1.0) * std::log(t) +
                  0.5 * n * (n - 1.0) * std::log(0.25 * t);
    return LogScaled::from_log(expo) * det;
}

double pv_a_difference(const SequenceWindow& w, DiffMode mode) {
    check_window(w, ShiftLabel::a_shift, mode == DiffMode::residual ? 4 : 3);
    const double n = w.fixed.N;
    const double mu = w.fixed.mu;
    const double a = w.values[1].first;
    QuotientParts q = pv_a_parts(n, a, mu, w.t,
                                 w.values[0].second, w.values[1].second,
                                 w.values[2].second);
    if (mode == DiffMode::step) return quotient_step(q, "a-shift");
    return quotient_residual(q, w.values[3].second);
}

double pv_mu_difference(const SequenceWindow& w, DiffMode mode) {
    check_window(w, ShiftLabel::mu_shift, mode == DiffMode::residual ? 4 : 3);
    if (w.values[0].first < 0)
        throw std::domain_error("pv_mu_difference: mu window must be nonnegative");
    const double n = w.fixed.N;
    const double a = w.fixed.a;
    const double mu = w.values[1].first;
    QuotientParts q = pv_mu_parts(n, a, mu, w.t,
                                  w.values[0].second, w.values[1].second,
                                  w.values[2].second);
    if (mode == DiffMode::step) return quotient_step(q, "mu-shift");
    return quotient_residual(q, w.values[3].second);
}

double hard_a_difference(const SequenceWindow& w, DiffMode mode) {
    check_window(w, ShiftLabel::a_shift, mode == DiffMode::residual ? 4 : 3);
    const double mu = w.fixed.mu;
    const double a = w.values[1].first;
    const double t = w.t;
    const double vm = w.values[0].second;
    const double v0 = w.values[1].second;
    const double vp = w.values[2].second;
    double lhs = 0.25 * a * (a + 1.0) * t;
    double b1 = vp - vm + a + mu;
    double b3 = 0.25 * t - a * vp + (a + 1.0) * v0;
    if (mode == DiffMode::step)
        return lhs / (guarded(b1) * guarded(b3)) + v0 - (a + mu + 1.0);
    double b2 = w.values[3].second - v0 + a + mu + 1.0;
    return relative_residual(lhs, b1 * b2 * b3);
}

double hard_mu_difference(const SequenceWindow& w, DiffMode mode) {
    check_window(w, ShiftLabel::mu_shift, mode == DiffMode::residual ? 4 : 3);
    const double a = w.fixed.a;
    const double mu = w.values[1].first;
    const double t = w.t;
    const double vm = w.values[0].second;
    const double v0 = w.values[1].second;
    const double vp = w.values[2].second;
    double lhs = -0.25 * t;
    double c1 = vp - v0;
    double c2 = vp - v0 + a;
    double c3 = vp - vm + a + mu;
    double d1 = vp - vm + a;
    if (mode == DiffMode::step) {
        // Clearing the one x-dependent denominator leaves an affine
        // equation for x = v(mu+2).
        guarded(d1);
        auto g = [&](double x) {
            return lhs * d1 * (x - v0 + a) - c1 * c2 * c3 * (x - v0 + a + mu + 1.0);
        };
        double g0 = g(0.0);
        double slope = g(1.0) - g0;
        if (std::abs(slope) < kDenFloor)
            throw std::domain_error("recurrences: step target drops out of the equation");
        double x = -g0 / slope;
        guarded(x - v0 + a);
        return x;
    }
    double x = w.values[3].second;
    double rhs = c1 * c2 * c3 * (x - v0 + a + mu + 1.0) /
                 (guarded(d1) * guarded(x - v0 + a));
    return relative_residual(lhs, rhs);
}

double hard_edge_v(int a, double mu, double t) {
    return -(hard_edge_sigma_det(a, mu, t) + 0.5 * mu * (mu + a));
}

}  // namespace lue
