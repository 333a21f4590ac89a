#include <lue/hankel.hpp>

#include <cmath>
#include <stdexcept>

#include <lue/linalg.hpp>
#include <lue/specfun.hpp>

namespace lue {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

int integer_dim(double a, const char* who) {
    double r = std::round(a);
    if (a < -0.5 || std::abs(a - r) > 1e-9) {
        throw std::domain_error(std::string(who) + ": requires integer a >= 0");
    }
    return static_cast<int>(r);
}

// det[L_{N+k-j}^{mu+j}(-s)], dimension adim. Entry (j,k) is the j-th
// s-derivative of e^{Ns} times a column polynomial, reduced to a single
// shifted Laguerre value; degree < 0 means the derivative annihilated it.
Mat<double> head_matrix(int N, double mu, int adim, double s) {
    Mat<double> D(adim, adim);
    for (int j = 0; j < adim; ++j) {
        for (int k = 0; k < adim; ++k) {
            int deg = N + k - j;
            D(j, k) = deg < 0 ? 0.0 : laguerre_L(deg, mu + j, -s);
        }
    }
    return D;
}

// prod_{m=1}^{N-1} m! as a log.
double log_superfactorial(int N) {
    double lg = 0.0;
    for (int m = 2; m < N; ++m) lg += ln_gamma(m + 1.0);
    return lg;
}

// Confluent matrix for the (s,inf) branch with an e^{-t} pulled out of every
// entry so the elements stay O(poly) as t grows:
//   Mt(j,k) = (N+a-k)_j e^{-t} M(mu+1+k, N+a+mu+1+j; t).
// diff=true returns the elementwise t-derivative of Mt.
Mat<double> tail_matrix(const LueParams& p, double t, bool diff) {
    int N = p.N;
    Mat<double> A(N, N);
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) {
            double al = p.mu + 1 + k, ga = N + p.a + p.mu + 1 + j;
            double poch = pochhammer(N + p.a - k, j);
            LogScaled m0 = kummer_M_scaled(al, ga, t);
            double e0 = m0.sign * std::exp(m0.log_magnitude - t);
            if (!diff) {
                A(j, k) = poch * e0;
            } else {
                LogScaled m1 = kummer_M_scaled(al + 1, ga + 1, t);
                double e1 = m1.sign * std::exp(m1.log_magnitude - t);
                A(j, k) = poch * ((al / ga) * e1 - e0);
            }
        }
    }
    return A;
}

// I-Bessel matrix e^{-sqrt t} I_{j-k+mu}(sqrt t), dimension adim, and its
// elementwise t-derivative (same e^{-sqrt t} scaling, product rule applied).
Mat<double> bessel_i_matrix(int adim, double mu, double t, bool diff) {
    double rt = std::sqrt(t);
    Mat<double> B(adim, adim);
    for (int j = 0; j < adim; ++j) {
        for (int k = 0; k < adim; ++k) {
            double nu = j - k + mu;
            LogScaled i0 = bessel_I(nu, rt);
            double e0 = i0.sign * std::exp(i0.log_magnitude - rt);
            if (!diff) {
                B(j, k) = e0;
            } else {
                LogScaled i1 = bessel_I(nu + 1, rt);
                double e1 = i1.sign * std::exp(i1.log_magnitude - rt);
                // d/dt I_nu(sqrt t) = (I_{nu+1} + (nu/sqrt t) I_nu)/(2 sqrt t)
                B(j, k) = (e1 + (nu / rt - 1.0) * e0) / (2.0 * rt);
            }
        }
    }
    return B;
}

} // namespace

LogScaled etilde_0s_det(const LueParams& p, double s) {
    int adim = integer_dim(p.a, "etilde_0s_det");
    LogScaled pre = laguerre_norm(p.N, p.a + p.mu) / laguerre_norm(p.N, p.a);
    pre = pre * LogScaled::from_log(-p.N * s);
    if (adim == 0) return pre;
    LogScaled ds = log_det(head_matrix(p.N, p.mu, adim, s), true);
    LogScaled d0 = log_det(head_matrix(p.N, p.mu, adim, 0.0), true);
    return pre * ds / d0;
}

LogScaled etilde_sinf_det(const LueParams& p, double s) {
    if (s <= 0.0) throw std::domain_error("etilde_sinf_det: s must be positive");
    int N = p.N;
    LogScaled c = jacobi_norm(N, p.a, p.mu) / laguerre_norm(N, p.a);
    c = c / LogScaled::from_log(log_superfactorial(N), (N / 2) % 2 ? -1 : 1);
    double power = (p.a + p.mu) * N + static_cast<double>(N) * N;
    LogScaled det = log_det(tail_matrix(p, s, false), true);
    return c * LogScaled::from_log(power * std::log(s)) * det;
}

double v_transcendent_det(const LueParams& p, double s) {
    int adim = integer_dim(p.a, "v_transcendent_det");
    double base = -p.mu * p.N - p.N * s;
    if (adim == 0) return base;
    Mat<double> D = head_matrix(p.N, p.mu, adim, s);
    Mat<double> Dp(adim, adim);
    // d/ds L_n^alpha(-s) = L_{n-1}^{alpha+1}(-s)
    for (int j = 0; j < adim; ++j) {
        for (int k = 0; k < adim; ++k) {
            int deg = p.N + k - j - 1;
            Dp(j, k) = deg < 0 ? 0.0 : laguerre_L(deg, p.mu + j + 1, -s);
        }
    }
    return base + s * trace_inv_times(D, Dp);
}

double u_transcendent_det(const LueParams& p, double t) {
    if (t <= 0.0) throw std::domain_error("u_transcendent_det: t must be positive");
    Mat<double> M = tail_matrix(p, t, false);
    Mat<double> Mp = tail_matrix(p, t, true);
    // The e^{-t} entry scaling shifts t tr(M^{-1} M') by -Nt, which absorbs
    // the drift term of the unscaled transcendent.
    return p.a * p.N + static_cast<double>(p.N) * p.N + t * trace_inv_times(M, Mp);
}

LogScaled hard_edge_etilde_det(int a, double mu, double t) {
    if (a < 0 || t < 0.0) throw std::domain_error("hard_edge_etilde_det: bad arguments");
    if (a == 0 || t == 0.0) return LogScaled::from_log(-t / 4.0);
    Mat<double> norm(a, a);
    for (int j = 0; j < a; ++j) {
        for (int k = 0; k < a; ++k) norm(j, k) = gamma_inv(j - k + mu + 1);
    }
    LogScaled n0 = log_det(norm, true) * LogScaled::from_log(-a * mu * std::log(2.0));
    LogScaled det = log_det(bessel_i_matrix(a, mu, t, false), true);
    double rt = std::sqrt(t);
    double lpre = -t / 4.0 - 0.5 * mu * a * std::log(t) + a * rt;
    return LogScaled::from_log(lpre) * det / n0;
}

double hard_edge_sigma_det(int a, double mu, double t) {
    if (a < 0 || t <= 0.0) throw std::domain_error("hard_edge_sigma_det: bad arguments");
    double sig = t / 4.0 + 0.5 * mu * a - 0.5 * mu * (mu + a);
    if (a == 0) return sig;
    Mat<double> B = bessel_i_matrix(a, mu, t, false);
    Mat<double> Bp = bessel_i_matrix(a, mu, t, true);
    // Scaling shift: tr(B^{-1}B') picked up -a/(2 sqrt t) from the e^{-sqrt t}.
    return sig - 0.5 * a * std::sqrt(t) - t * trace_inv_times(B, Bp);
}

double hard_edge_sigma_j_det(int n, double nu, double t) {
    if (n <= 0 || t <= 0.0) throw std::domain_error("hard_edge_sigma_j_det: bad arguments");
    double rt = std::sqrt(t);
    Mat<double> B(n, n), Bp(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            double v = j - k + nu;
            double j0 = bessel_J(v, rt), j1 = bessel_J(v + 1, rt);
            B(j, k) = j0;
            // d/dt J_v(sqrt t) = (-J_{v+1} + (v/sqrt t) J_v)/(2 sqrt t)
            Bp(j, k) = (-j1 + (v / rt) * j0) / (2.0 * rt);
        }
    }
    return t / 4.0 - 0.5 * nu * nu - t * trace_inv_times(B, Bp);
}

LogScaled xi_deformed_gap(const LueParams& p, double s, double xi, bool tail) {
    if (p.mu != 0.0) throw std::domain_error("xi_deformed_gap: mu must be 0");
    MomentWeight w;
    w.kind = MomentWeight::Kind::laguerre_xi;
    w.p = p;
    w.p.xi = xi;
    w.s = s;
    w.xi_tail_interval = tail;
    return heine_average(w, p.N) / laguerre_norm(p.N, p.a);
}

std::vector<double> gap_count_distribution(const LueParams& p, double s,
                                           int max_n, bool tail) {
    int N = p.N;
    if (max_n < 0) return {};
    // Sample the generating function at xi = 1 - eta on Chebyshev points of
    // [0,1] and solve the (N+1)-point Vandermonde system in the eta basis:
    // its coefficients are the count probabilities themselves.
    std::vector<dd> b(N + 1);
    Mat<dd> V(N + 1, N + 1);
    for (int i = 0; i <= N; ++i) {
        double eta = 0.5 * (1.0 + std::cos(kPi * i / N));
        LogScaled e = xi_deformed_gap(p, s, 1.0 - eta, tail);
        b[i] = dd(e.sign * std::exp(e.log_magnitude));
        dd pw(1.0);
        for (int j = 0; j <= N; ++j) {
            V(i, j) = pw;
            pw *= dd(eta);
        }
    }
    std::vector<int> piv;
    if (lu_decompose(V, piv) == 0) {
        throw std::runtime_error("gap_count_distribution: singular sample system");
    }
    lu_solve_inplace(V, piv, b);
    std::vector<double> out(std::min(max_n, N) + 1, 0.0);
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, b[i].to_double());
    return out;
}

} // namespace lue
