#pragma once

#include <vector>

#include <lue/ensembles.hpp>
#include <lue/scaled.hpp>

namespace lue {

// Closed-form determinant routes for the gap quantities. Each function here
// evaluates a finite determinant of special-function entries; the ODE and
// recurrence routes elsewhere must reproduce these values, so this module is
// the anchor of every cross-check.

// Deformed gap probability for the interval (0,s): the LUE average of
// prod_j (lambda_j - s)^mu restricted to configurations with all
// eigenvalues above s. Requires integer a >= 0 (determinant dimension a).
// Valid for all real s; for s <= 0 the indicator is vacuous.
LogScaled etilde_0s_det(const LueParams& p, double s);

// Deformed gap probability for (s,inf): the LUE average of
// prod_j (s - lambda_j)^mu over configurations with all eigenvalues below s.
// Determinant dimension N; any real a > -1, mu >= 0. Requires s > 0.
LogScaled etilde_sinf_det(const LueParams& p, double s);

// Log-derivative transcendents of the two determinants above, in the
// normalization used by the sigma-form ODEs:
//   v_det(s) = -mu N - N s + s (d/ds) log det D(s)   (0,s) branch
//   u_det(t) = a N + N^2 + t (d/dt) log det Mtilde(t) (s,inf) branch,
// where Mtilde carries an e^{-t} scaling per entry that absorbs the -Nt
// drift. v_det is polynomial-backed and valid for all real s.
double v_transcendent_det(const LueParams& p, double s);
double u_transcendent_det(const LueParams& p, double t);

// Hard-edge scaled gap probability in the I-Bessel determinant form,
// dimension a (integer >= 0), normalized to 1 at t = 0.
LogScaled hard_edge_etilde_det(int a, double mu, double t);

// sigma(t) = -t (d/dt) log [ e^{-t/4} t^{-mu a / 2} det_a I_{j-k+mu}(sqrt t) ]
// shifted so that sigma -> -mu(mu+a)/2 as t -> 0+.
double hard_edge_sigma_det(int a, double mu, double t);

// J-Bessel analogue on the other side of the spectrum edge:
// sigma_J(t) = -t (d/dt) log [ e^{-t/4} t^{nu^2/2} det_n J_{j-k+nu}(sqrt t) ].
// Used to continue the edge density below the origin.
double hard_edge_sigma_j_det(int n, double nu, double t);

// Generating-function gap probability with each eigenvalue in the interval
// weighted by (1-xi): tail=false weights (0,s), tail=true weights (s,inf).
// Evaluated as a Hankel determinant of moments (Heine identity).
LogScaled xi_deformed_gap(const LueParams& p, double s, double xi, bool tail);

// Probabilities E_N(n) that the interval holds exactly n eigenvalues,
// n = 0..max_n, extracted from the xi-generating function: the gap
// probability is a degree-N polynomial in eta = 1-xi whose eta^n
// coefficient is E_N(n). Solved from N+1 Chebyshev samples in quad
// precision so the small high-n probabilities survive the elimination.
std::vector<double> gap_count_distribution(const LueParams& p, double s,
                                           int max_n, bool tail);

}  // namespace lue
