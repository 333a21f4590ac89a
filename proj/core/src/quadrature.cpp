#include <lue/quadrature.hpp>

#include <lue/specfun.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace lue {

namespace {

// Gauss rule from the monic three-term recurrence
//   p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1},
// beta0 = total weight mass. Implicit-shift QL on the Jacobi matrix,
// rotations accumulated on the first-row vector only.
QuadRule golub_welsch(const std::vector<double>& alpha,
                      const std::vector<double>& beta, double beta0) {
    int n = static_cast<int>(alpha.size());
    std::vector<double> d = alpha, e(n, 0.0), z(n, 0.0);
    for (int i = 1; i < n; ++i) e[i - 1] = std::sqrt(beta[i]);
    z[0] = 1.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            for (; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-15 * dd) break;
            }
            if (m == l) break;
            if (++iter > 60) throw std::runtime_error("golub_welsch: QL did not converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });
    QuadRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.x[i] = d[idx[i]];
        rule.w[i] = beta0 * z[idx[i]] * z[idx[i]];
    }
    return rule;
}

std::mutex cache_mutex;

} // namespace

const QuadRule& gauss_legendre(int n) {
    static std::map<int, QuadRule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> alpha(n, 0.0), beta(n, 0.0);
    for (int k = 1; k < n; ++k) beta[k] = k * k / (4.0 * k * k - 1.0);
    return cache.emplace(n, golub_welsch(alpha, beta, 2.0)).first->second;
}

QuadRule gauss_legendre_mapped(int n, double a, double b) {
    const QuadRule& base = gauss_legendre(n);
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.x[i] = mid + half * base.x[i];
        r.w[i] = half * base.w[i];
    }
    return r;
}

QuadRule gauss_jacobi01(int n, double a, double b) {
    if (a <= -1.0 || b <= -1.0) throw std::domain_error("gauss_jacobi01: need a, b > -1");
    static std::map<std::tuple<int, double, double>, QuadRule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_tuple(n, a, b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // Weight (1-x)^A (1+x)^B on [-1,1] with A=b, B=a maps to x^a (1-x)^b on [0,1].
    double A = b, B = a;
    std::vector<double> alpha(n), beta(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double s = 2.0 * k + A + B;
        double ahat;
        if (k == 0) {
            ahat = (B - A) / (A + B + 2.0);
        } else {
            ahat = (B * B - A * A) / (s * (s + 2.0));
        }
        alpha[k] = 0.5 * (1.0 + ahat);
        if (k == 1) {
            beta[k] = 4.0 * (1.0 + A) * (1.0 + B) /
                      ((2.0 + A + B) * (2.0 + A + B) * (3.0 + A + B)) / 4.0;
        } else if (k >= 2) {
            beta[k] = 4.0 * k * (k + A) * (k + B) * (k + A + B) /
                      (s * s * (s + 1.0) * (s - 1.0)) / 4.0;
        }
    }
    double beta0 = std::exp(ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0));
    return cache.emplace(key, golub_welsch(alpha, beta, beta0)).first->second;
}

QuadRule gauss_laguerre(int n, double alpha_w) {
    if (alpha_w <= -1.0) throw std::domain_error("gauss_laguerre: need alpha > -1");
    static std::map<std::pair<int, double>, QuadRule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(n, alpha_w);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<double> alpha(n), beta(n, 0.0);
    for (int k = 0; k < n; ++k) {
        alpha[k] = 2.0 * k + alpha_w + 1.0;
        if (k >= 1) beta[k] = k * (k + alpha_w);
    }
    double beta0 = std::exp(ln_gamma(alpha_w + 1.0));
    return cache.emplace(key, golub_welsch(alpha, beta, beta0)).first->second;
}

void gauss_laguerre_rule(int n, double alpha, std::vector<double>& x,
                         std::vector<double>& w) {
    QuadRule r = gauss_laguerre(n, alpha);
    x = r.x;
    w = r.w;
}

namespace {

double simpson_segment(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double fm,
                            double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson_segment(a, fa, m, fm, flm);
    double right = simpson_segment(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0) return left + right + delta / 15.0;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson_segment(a, fa, b, fb, fm);
    return adaptive_simpson_rec(f, a, fa, b, fb, fm, whole, tol, max_depth);
}

std::vector<std::vector<double>> fd_weights(double z,
                                            const std::vector<double>& xs,
                                            int m) {
    int n = static_cast<int>(xs.size());
    if (n < m + 1) throw std::domain_error("fd_weights: need at least m+1 nodes");
    std::vector<std::vector<double>> w(m + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0, c4 = xs[0] - z;
    w[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    w[k][i] = c1 * (k * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                w[k][j] = (c4 * w[k][j] - k * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    return w;
}

} // namespace lue
