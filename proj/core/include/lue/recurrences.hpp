#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <lue/ensembles.hpp>
#include <lue/scaled.hpp>

namespace lue {

// Discrete verification layer: the Toda recurrence that ties consecutive
// tau functions together, and the third-order difference equations the
// gap log-derivatives satisfy under unit shifts of a or mu. Residual
// modes check values produced elsewhere; step modes propagate a window
// one shift further.

enum class ShiftLabel { a_shift, mu_shift, toda_n };
enum class DiffMode { residual, step };

// Consecutive integer-indexed slice of a transcendent family at fixed t.
// For a_shift the index is the value of a (N, mu held in `fixed`); for
// mu_shift the index is mu. The field of `fixed` that the index replaces
// is ignored.
struct SequenceWindow {
    ShiftLabel label = ShiftLabel::a_shift;
    std::vector<std::pair<int, double>> values;
    double t = 0.0;
    LueParams fixed;
};

// Residual of  delta^2 log taubar[n] = taubar[n-1] taubar[n+1] / taubar[n]^2
// with delta = t d/dt, relative to the larger side (floored at 1). The
// second log-derivative is taken by central differences in log t at
// spacings h and h/2 on a five-point stencil, Richardson-combined to
// fourth order. Defined for n >= 1; taubar must keep one sign across the
// stencil.
double toda_residual(const std::function<LogScaled(int, double)>& tau_bar,
                     int n, double t, double h = 0.05);

// Tau sequence assembled from the (s,inf) determinant gap probabilities,
// with a stepping down along the chain: member n carries a = abar - n
// (needs abar - n > -1). The t -> 0 constant of each member is fixed so
// the Toda recurrence holds with unit coefficient; taubar[0] = 1,
// taubar[-1] = 0.
LogScaled toda_pv_tau_bar(double abar, double mu, int n, double t);

// Tau sequence of modified-Bessel determinants,
//   taubar[n] = t^{-n(nu-1)/2} (t/4)^{n(n-1)/2} det[I_{j-k+nu}(sqrt t)],
// (dimension n), the closed-form companion chain; taubar[0] = 1.
LogScaled toda_piii_tau_bar(double nu, int n, double t);

// Third-order difference equation in a for the (s,inf) transcendent U_N;
// V_N from the (0,s) branch satisfies the same relation. residual mode
// consumes four consecutive values and returns |lhs - rhs| relative to
// the larger side; step mode consumes three and returns the value
// predicted one shift above the window. Every denominator is required to
// stay above 1e-8 in magnitude.
double pv_a_difference(const SequenceWindow& w, DiffMode mode);

// Companion difference equation shifting mu instead of a; the window must
// run over nonnegative integer mu.
double pv_mu_difference(const SequenceWindow& w, DiffMode mode);

// Hard-edge difference equations in a and mu for the shifted transcendent
// v = -(sigma + mu(mu+a)/2) of the Bessel-determinant route.
double hard_a_difference(const SequenceWindow& w, DiffMode mode);
double hard_mu_difference(const SequenceWindow& w, DiffMode mode);

// The v-transcendent those two equations act on, from the determinant
// route; v(t;0,0) = -t/4.
double hard_edge_v(int a, double mu, double t);

}  // namespace lue
