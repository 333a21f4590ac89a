#pragma once

#include <lue/linalg.hpp>
#include <lue/scaled.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace lue {

// Ensemble parameters: matrix size N, Laguerre exponent a > -1, deformation
// exponent mu, and the xi interval-deformation strength (1 = hard gap).
struct LueParams {
    int N = 1;
    double a = 0.0;
    double mu = 0.0;
    double xi = 1.0;
};

void validate(const LueParams& p);

// I_N(a) = prod_{j=1..N} Gamma(1+j) Gamma(a+j)
LogScaled laguerre_norm(int N, double a);
// J_N(a,b) = prod_{j=0..N-1} Gamma(a+1+j) Gamma(b+1+j) Gamma(2+j) / Gamma(a+b+N+j+1)
LogScaled jacobi_norm(int N, double a, double b);
// M_N(a',b') = prod_{j=0..N-1} Gamma(2+j) Gamma(1+a'+b'+j) / (Gamma(1+a'+j) Gamma(1+b'+j))
LogScaled morris_norm(int N, double ap, double bp);

// One-dimensional weights whose Hankel moment determinants reproduce the
// squared-Vandermonde multiple integrals.
struct MomentWeight {
    enum class Kind {
        laguerre_tail,   // support (s,inf): lambda^a e^{-lambda} (lambda-s)^mu
        laguerre_head,   // support (0,s):   lambda^a e^{-lambda} (s-lambda)^mu
        laguerre_xi,     // support (0,inf): lambda^a e^{-lambda} (1 - xi chi_I), mu = 0
        jacobi_laplace,  // support (0,1):   x^a (1-x)^mu e^{-s x}
        circle,          // unit circle symbol (handled by toeplitz_average)
    };
    Kind kind = Kind::laguerre_tail;
    LueParams p;
    double s = 0.0;
    bool xi_tail_interval = false; // laguerre_xi: deform (s,inf) instead of (0,s)
};

// The i-th moment of the weight, i = 0..2N-2, all from one shared rule so the
// Hankel matrix stays internally coherent. quad_points is the base rule size.
std::vector<dd> weight_moments(const MomentWeight& w, int count, int quad_points);

// N-fold integral over the weight's support of prod w(l_i) * Vandermonde^2,
// evaluated as N! det[m_{j+k}]. Doubles the rule size once and fails loudly
// if the two determinants disagree beyond 1e-8 relative.
LogScaled heine_average(const MomentWeight& w, int N, int quad_points = 160);

// dim x dim Toeplitz determinant of the symbol's Fourier coefficients,
// trapezoid-sampled with doubling; the symbol is 1-periodic in x.
LogScaled toeplitz_average(const std::function<std::complex<double>(double)>& symbol,
                           int dim);

// Toeplitz determinant with caller-supplied real coefficients c[m] = entry(j-k=m).
LogScaled toeplitz_det_from_coeffs(const std::function<double(int)>& coeff, int dim);

// det[c_{j-k} - c_{j+k}]_{j,k=1..dim} (Toeplitz minus Hankel block).
LogScaled toeplitz_minus_hankel_det(const std::function<double(int)>& coeff, int dim);

// Eigenvalues of A = X^dagger X for X an n x N complex standard Gaussian
// matrix, ascending; deterministic in (seed, sample_index).
std::vector<double> wishart_sample_spectrum(int n, int N, std::uint64_t seed,
                                            std::uint64_t sample_index = 0);

// All eigenvalues of the Hermitian matrix re + i*im via cyclic Jacobi on the
// doubled real-symmetric embedding.
std::vector<double> hermitian_eigenvalues(const Mat<double>& re, const Mat<double>& im);

// Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps.
std::vector<double> symmetric_eigenvalues(Mat<double> A);

} // namespace lue
