#pragma once

#include <array>
#include <vector>

#include <lue/ensembles.hpp>
#include <lue/scaled.hpp>

namespace lue {

enum class SigmaFamily { PV, PIII, PII };
enum class SigmaBranch { origin, infinity };

// One sigma-form transcendent. The PV parameter block is arranged as
// nu = (0, -mu, N+a, N); PIII carries (v1, v2) = (a+mu, a-mu); PII carries
// the alpha of its second-degree form. `branch` names where the defining
// boundary data lives: `origin` for the Laplace-transform transcendent
// (value and slope fixed at t=0+, decay imposed far out), `infinity` for
// the gap transcendents (prescribed growth at large t).
struct SigmaSpec {
    SigmaFamily family = SigmaFamily::PV;
    std::array<double, 4> pv_nu{0.0, 0.0, 0.0, 0.0};
    std::array<double, 2> piii_v{0.0, 0.0};
    double pii_alpha = 0.0;
    SigmaBranch branch = SigmaBranch::infinity;
    double seed_point = 0.3;
    int series_order = 20;
};

// Canonical spec builders for the transcendents in use. v: interval (0,s)
// deformed gap; u: interval (s,inf) / Laplace average; hard: hard-edge
// scaling limit; soft: spectrum-edge second-degree form at alpha = mu.
SigmaSpec sigma_spec_v(const LueParams& p);
SigmaSpec sigma_spec_u(const LueParams& p);
SigmaSpec sigma_spec_hard(double a, double mu);
SigmaSpec sigma_spec_soft(double mu = 0.5);

// Amplitude of the decaying Airy-type term that selects the edge
// transcendent among the solutions sharing its left algebraic series: the
// unique value connecting onto the -mu*sqrt(t) branch on the right.
// Exactly -2^{-2/3} at mu = 1/2; located by bisection otherwise.
double pii_edge_amplitude(double mu);

// Left-hand side of the family's sigma-form at (t, sigma, sigma', sigma'');
// zero on solutions.
double sigma_residual(const SigmaSpec& spec, double t, double sigma, double d1,
                      double d2);

// Power series of the transcendent at the origin on the t^{1/den} lattice.
// Low orders are prescribed by the boundary data, the resonant lattice
// index kstar carries the one coefficient the origin data does not fix,
// and everything else follows from the sigma-form recurrence.
struct OriginSeries {
    int den = 1;
    int kstar = 0;
    std::vector<double> c; // coefficient of t^{m/den}
};

OriginSeries origin_series(const SigmaSpec& spec, int order, double resonant_c);
std::array<double, 3> series_eval(const OriginSeries& s, double t);
double series_log_integral(const OriginSeries& s, double t);

struct SolutionTable {
    std::vector<double> t;
    std::vector<double> sigma;
    std::vector<double> sigma_prime;
    std::vector<double> sigma_second;
    // Accumulated int_0^t (sigma(x) - sigma(0+))/x dx for PV/PIII rows.
    // For PII rows: int (u(x) - x^2/4) dx, taken from -infinity when the
    // left algebraic series is the bare parabola (mu = 1/2, where that
    // integral converges) and from the march base point otherwise, leaving
    // only differences meaningful.
    std::vector<double> log_integral;
    double max_form_residual = 0.0;
    // Free origin-series coefficient fixed by the far boundary condition.
    double resonant_coefficient = 0.0;
};

// Solve the transcendent over [t_lo, t_hi] and tabulate it at eval_points
// (default: an internally chosen grid). PV/PIII solutions are pinned to
// both boundaries by multiple shooting: the origin series supplies the
// seed with its resonant coefficient unknown, interior node states are
// unknowns, and a Newton iteration drives segment-continuity plus the far
// boundary value to zero. PII is a plain initial value problem. The
// sigma-form value is monitored along the solution as a first integral;
// its maximum is reported in the table.
SolutionTable solve_sigma(const SigmaSpec& spec, double t_lo, double t_hi,
                          double tol,
                          const std::vector<double>& eval_points = {});

enum class EtildeRoute { pv_0s, pv_sinf_U, hard, soft };

// Assemble the gap probability (or average) from a solved transcendent at
// every grid point of the table. pv_0s and pv_sinf_U need the ensemble
// parameters for their prefactors; hard ignores them; soft is exposed as a
// ratio against the table's left endpoint.
std::vector<LogScaled> etilde_from_sigma(const SolutionTable& table,
                                         EtildeRoute route, const LueParams& p);

struct PiiTable {
    std::vector<double> t;
    std::vector<double> q;
    std::vector<double> q_prime;
    std::vector<double> q_sq_integral; // integral of q^2 from t to the seed end
};

// Second Painleve transcendent on the branch decaying like -Ai(t): seeded
// from the Airy function at t_hi and integrated down to t_lo.
PiiTable solve_pii_q(double t_lo, double t_hi, double tol,
                     const std::vector<double>& eval_points = {});

enum class TwRoute { tw_sigma, tw_q };

// Cumulative distribution of the scaled largest eigenvalue (orthogonal
// symmetry class), by two independent routes: the second-degree form of
// the edge transcendent, or the tail integrals of the -Ai branch.
double tracy_widom_f1(double s, TwRoute route);
std::vector<double> tracy_widom_f1(const std::vector<double>& s, TwRoute route);

} // namespace lue
