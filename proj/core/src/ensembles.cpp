#include <lue/ensembles.hpp>

#include <lue/quadrature.hpp>
#include <lue/rng.hpp>
#include <lue/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace lue {

void validate(const LueParams& p) {
    if (p.N < 1) throw std::domain_error("LueParams: N >= 1 required");
    if (!(p.a > -1.0)) throw std::domain_error("LueParams: a > -1 required");
    if (!(p.mu > -1.0)) throw std::domain_error("LueParams: mu > -1 required");
}

LogScaled laguerre_norm(int N, double a) {
    if (!(a > -1.0)) throw std::domain_error("laguerre_norm: a > -1 required");
    double lm = 0.0;
    for (int j = 1; j <= N; ++j) lm += ln_gamma(1.0 + j) + ln_gamma(a + j);
    return LogScaled::from_log(lm, 1);
}

LogScaled jacobi_norm(int N, double a, double b) {
    if (!(a > -1.0) || !(b > -1.0)) throw std::domain_error("jacobi_norm: a, b > -1 required");
    double lm = 0.0;
    for (int j = 0; j < N; ++j) {
        lm += ln_gamma(a + 1.0 + j) + ln_gamma(b + 1.0 + j) + ln_gamma(2.0 + j) -
              ln_gamma(a + b + N + j + 1.0);
    }
    return LogScaled::from_log(lm, 1);
}

LogScaled morris_norm(int N, double ap, double bp) {
    if (!(ap + bp > -1.0)) throw std::domain_error("morris_norm: a'+b' > -1 required");
    double lm = 0.0;
    for (int j = 0; j < N; ++j) {
        lm += ln_gamma(2.0 + j) + ln_gamma(1.0 + ap + bp + j) -
              ln_gamma(1.0 + ap + j) - ln_gamma(1.0 + bp + j);
    }
    return LogScaled::from_log(lm, 1);
}

namespace {

// Moments of laguerre_tail: int_s^inf l^{a+i} e^{-l} (l-s)^mu dl
// = e^{-s} int_0^inf (s+x)^{a+i} x^mu e^{-x} dx.
std::vector<dd> tail_moments(const LueParams& p, double s, int count, int npts) {
    QuadRule rule = gauss_laguerre(npts, p.mu);
    std::vector<dd> m(count, dd(0.0));
    for (size_t q = 0; q < rule.x.size(); ++q) {
        double l = s + rule.x[q];
        double base = rule.w[q] * std::exp(-s + p.a * std::log(l));
        double pw = base;
        for (int i = 0; i < count; ++i) {
            m[i] += dd(pw);
            pw *= l;
        }
    }
    return m;
}

// Moments of laguerre_head: int_0^s l^{a+i} e^{-l} (s-l)^mu dl
// = s^{a+mu+i+1} int_0^1 v^{a+i} (1-v)^mu e^{-s v} dv.
std::vector<dd> head_moments(const LueParams& p, double s, int count, int npts) {
    QuadRule rule = gauss_jacobi01(npts, p.a, p.mu);
    std::vector<dd> m(count, dd(0.0));
    double ls = std::log(s);
    for (size_t q = 0; q < rule.x.size(); ++q) {
        double v = rule.x[q];
        double base = rule.w[q] * std::exp(-s * v + (p.a + p.mu + 1.0) * ls);
        double pw = base;
        for (int i = 0; i < count; ++i) {
            m[i] += dd(pw);
            pw *= v * s;
        }
    }
    return m;
}

std::vector<dd> xi_moments(const LueParams& p, double s, bool tail_interval,
                           int count) {
    // Full Gamma moment minus xi times the moment over the gap interval,
    // arranged so no large cancellation occurs.
    std::vector<dd> m(count, dd(0.0));
    for (int i = 0; i < count; ++i) {
        double arg = p.a + i + 1.0;
        LogScaled low = lower_incomplete_gamma(arg, s);
        LogScaled up = upper_incomplete_gamma(arg, s);
        double lo = low.to_double(), u = up.to_double();
        if (!tail_interval) {
            m[i] = dd(1.0 - p.xi) * dd(lo) + dd(u);
        } else {
            m[i] = dd(lo) + dd(1.0 - p.xi) * dd(u);
        }
    }
    return m;
}

std::vector<dd> jacobi_laplace_moments(const LueParams& p, double s, int count,
                                       int npts) {
    QuadRule rule = gauss_jacobi01(npts, p.a, p.mu);
    std::vector<dd> m(count, dd(0.0));
    for (size_t q = 0; q < rule.x.size(); ++q) {
        double v = rule.x[q];
        double pw = rule.w[q] * std::exp(-s * v);
        for (int i = 0; i < count; ++i) {
            m[i] += dd(pw);
            pw *= v;
        }
    }
    return m;
}

LogScaled hankel_det_from_moments(const std::vector<dd>& m, int N) {
    Mat<dd> H(N, N);
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) H(j, k) = m[j + k];
    }
    return log_det(H);
}

} // namespace

std::vector<dd> weight_moments(const MomentWeight& w, int count, int quad_points) {
    switch (w.kind) {
        case MomentWeight::Kind::laguerre_tail:
            return tail_moments(w.p, w.s, count, quad_points);
        case MomentWeight::Kind::laguerre_head:
            return head_moments(w.p, w.s, count, quad_points);
        case MomentWeight::Kind::laguerre_xi:
            return xi_moments(w.p, w.s, w.xi_tail_interval, count);
        case MomentWeight::Kind::jacobi_laplace:
            return jacobi_laplace_moments(w.p, w.s, count, quad_points);
        case MomentWeight::Kind::circle:
            throw std::domain_error("weight_moments: circle weights use toeplitz_average");
    }
    throw std::logic_error("weight_moments: unknown kind");
}

LogScaled heine_average(const MomentWeight& w, int N, int quad_points) {
    if (N < 1) throw std::domain_error("heine_average: N >= 1");
    int count = 2 * N - 1;
    LogScaled det1 = hankel_det_from_moments(weight_moments(w, count, quad_points), N);
    LogScaled det2 = det1;
    if (w.kind != MomentWeight::Kind::laguerre_xi) {
        det2 = hankel_det_from_moments(weight_moments(w, count, 2 * quad_points), N);
        if (rel_diff(det1, det2) > 1e-8) {
            throw std::runtime_error("heine_average: quadrature did not converge");
        }
    }
    double lfact = 0.0;
    for (int j = 2; j <= N; ++j) lfact += std::log(static_cast<double>(j));
    det2.log_magnitude += lfact;
    return det2;
}

namespace {

LogScaled complex_log_det(std::vector<std::vector<std::complex<double>>> A) {
    int n = static_cast<int>(A.size());
    if (n == 0) return LogScaled::one();
    double logmag = 0.0;
    std::complex<double> phase(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(A[k][k]);
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(A[i][k]) > best) {
                best = std::abs(A[i][k]);
                p = i;
            }
        }
        if (best == 0.0) return LogScaled::zero();
        if (p != k) {
            std::swap(A[k], A[p]);
            phase = -phase;
        }
        std::complex<double> d = A[k][k];
        logmag += std::log(std::abs(d));
        phase *= d / std::abs(d);
        for (int i = k + 1; i < n; ++i) {
            std::complex<double> f = A[i][k] / d;
            for (int j = k + 1; j < n; ++j) A[i][j] -= f * A[k][j];
        }
    }
    if (std::abs(phase.imag()) > 1e-7) {
        throw std::runtime_error("toeplitz_average: determinant is not real");
    }
    return LogScaled::from_log(logmag, phase.real() >= 0.0 ? 1 : -1);
}

} // namespace

LogScaled toeplitz_average(const std::function<std::complex<double>(double)>& symbol,
                           int dim) {
    if (dim == 0) return LogScaled::one();
    // Fourier coefficients c_m = int_0^1 symbol(x) e^{-2 pi i m x} dx by the
    // periodic trapezoid rule, doubled until the determinant settles.
    LogScaled prev = LogScaled::zero();
    for (int P = 256; P <= 16384; P *= 2) {
        std::vector<std::complex<double>> samples(P);
        for (int p = 0; p < P; ++p) samples[p] = symbol(static_cast<double>(p) / P);
        auto coeff = [&](int mm) {
            std::complex<double> sum(0.0, 0.0);
            for (int p = 0; p < P; ++p) {
                double ang = -6.283185307179586476925286766559 * mm * p / P;
                sum += samples[p] * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            return sum / static_cast<double>(P);
        };
        std::vector<std::vector<std::complex<double>>> T(
            dim, std::vector<std::complex<double>>(dim));
        for (int j = 0; j < dim; ++j) {
            for (int k = 0; k < dim; ++k) T[j][k] = coeff(j - k);
        }
        LogScaled det = complex_log_det(std::move(T));
        if (prev.sign != 0 && rel_diff(prev, det) < 1e-11) return det;
        prev = det;
    }
    throw std::runtime_error("toeplitz_average: trapezoid sampling did not converge");
}

LogScaled toeplitz_det_from_coeffs(const std::function<double(int)>& coeff, int dim) {
    if (dim == 0) return LogScaled::one();
    Mat<double> T(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) T(j, k) = coeff(j - k);
    }
    return log_det(T, true);
}

LogScaled toeplitz_minus_hankel_det(const std::function<double(int)>& coeff, int dim) {
    if (dim == 0) return LogScaled::one();
    Mat<double> T(dim, dim);
    for (int j = 1; j <= dim; ++j) {
        for (int k = 1; k <= dim; ++k) T(j - 1, k - 1) = coeff(j - k) - coeff(j + k);
    }
    return log_det(T, true);
}

std::vector<double> symmetric_eigenvalues(Mat<double> A) {
    int n = A.n;
    double off = 0.0, norm = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            norm += A(i, j) * A(i, j);
            if (i != j) off += A(i, j) * A(i, j);
        }
    }
    const double thresh = 1e-26 * std::max(norm, 1e-300);
    for (int sweep = 0; sweep < 64 && off > thresh; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = A(p, q);
                if (std::abs(apq) < 1e-300) continue;
                double theta = 0.5 * (A(q, q) - A(p, p)) / apq;
                double t = std::copysign(1.0, theta) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
            }
        }
        off = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j) off += A(i, j) * A(i, j);
            }
        }
    }
    if (off > thresh * 1e6) throw std::runtime_error("symmetric_eigenvalues: Jacobi sweeps did not converge");
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = A(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> hermitian_eigenvalues(const Mat<double>& re, const Mat<double>& im) {
    int n = re.n;
    Mat<double> M(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            M(i, j) = re(i, j);
            M(n + i, n + j) = re(i, j);
            M(i, n + j) = -im(i, j);
            M(n + i, j) = im(i, j);
        }
    }
    std::vector<double> all = symmetric_eigenvalues(std::move(M));
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = 0.5 * (all[2 * i] + all[2 * i + 1]);
    return ev;
}

std::vector<double> wishart_sample_spectrum(int n, int N, std::uint64_t seed,
                                            std::uint64_t sample_index) {
    if (n < N || N < 1) throw std::domain_error("wishart_sample_spectrum: need n >= N >= 1");
    CounterRng rng = CounterRng(seed).stream(sample_index);
    // X is n x N with independent standard complex Gaussian entries
    // (unit variance per complex entry).
    std::vector<double> xr(static_cast<size_t>(n) * N), xi(static_cast<size_t>(n) * N);
    const double inv_sqrt2 = 0.70710678118654752440084436210485;
    for (size_t e = 0; e < xr.size(); ++e) {
        double g0, g1;
        rng.gaussian_pair(e, g0, g1);
        xr[e] = g0 * inv_sqrt2;
        xi[e] = g1 * inv_sqrt2;
    }
    Mat<double> re(N, N), im(N, N);
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) {
            dd sr(0.0), si(0.0);
            for (int i = 0; i < n; ++i) {
                double ar = xr[static_cast<size_t>(i) * N + j];
                double ai = xi[static_cast<size_t>(i) * N + j];
                double br = xr[static_cast<size_t>(i) * N + k];
                double bi = xi[static_cast<size_t>(i) * N + k];
                sr += dd(ar * br + ai * bi);
                si += dd(ar * bi - ai * br);
            }
            re(j, k) = sr.to_double();
            im(j, k) = si.to_double();
        }
    }
    return hermitian_eigenvalues(re, im);
}

} // namespace lue
