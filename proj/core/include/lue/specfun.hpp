#pragma once

#include <lue/scaled.hpp>

namespace lue {

// Tuning knobs for the series/asymptotic evaluators.
struct SeriesControl {
    double rel_tol = 1e-15;
    int max_terms = 4000;
    double asymptotic_switch = 60.0; // switch point for the Kummer M series
};

inline constexpr SeriesControl default_series_control{};

// log Gamma(x), x > 0. Stirling with Bernoulli tail after an argument shift.
double ln_gamma(double x);

// log |Gamma(x)| and the sign of Gamma(x); x may be negative non-integer.
LogScaled ln_gamma_signed(double x);

// 1/Gamma(x) as an entire function: zero at nonpositive integers.
double gamma_inv(double x);

// Pochhammer symbol (a)_n for integer n >= 0.
double pochhammer(double a, int n);

// Lower incomplete gamma(a,x) = int_0^x u^{a-1} e^{-u} du, a > 0, x >= 0.
LogScaled lower_incomplete_gamma(double a, double x);

// Upper incomplete Gamma(a,x) = Gamma(a) - gamma(a,x).
LogScaled upper_incomplete_gamma(double a, double x);

// Confluent hypergeometric 1F1(a; c; x).
double kummer_M(double a, double c, double x,
                const SeriesControl& ctrl = default_series_control);
LogScaled kummer_M_scaled(double a, double c, double x,
                          const SeriesControl& ctrl = default_series_control);

// Tricomi psi(a; c; x) for a > 0, x > 0, via its Laplace-type integral
// evaluated with generalized Gauss-Laguerre rules of doubling order.
LogScaled tricomi_U(double a, double c, double x,
                    const SeriesControl& ctrl = default_series_control);

// Modified Bessel I_nu(x), any real nu (negative orders are needed by the
// hard-edge determinants), x >= 0 (x > 0 when nu < 0).
LogScaled bessel_I(double nu, double x,
                   const SeriesControl& ctrl = default_series_control);

// Bessel J_nu(x), any real nu, x >= 0, by backward (Miller) recurrence.
double bessel_J(double nu, double x,
                const SeriesControl& ctrl = default_series_control);

// d^j/dx^j of the generalized Laguerre polynomial L_n^mu(x), exact
// coefficient form accumulated in double-double.
double laguerre_L(int n, double mu, double x, int deriv_order = 0);

// Airy Ai (deriv = 0) or Ai' (deriv = 1) on the real line.
double airy_ai(double x, int deriv = 0);

} // namespace lue
