#pragma once

#include <lue/scaled.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace lue {

template <class T>
struct Mat {
    int n = 0, m = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int rows, int cols)
        : n(rows), m(cols), a(static_cast<size_t>(rows) * cols, T(0.0)) {}

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * m + j]; }
    const T& operator()(int i, int j) const {
        return a[static_cast<size_t>(i) * m + j];
    }
};

namespace detail {
inline double mag(double x) { return std::abs(x); }
inline double mag(const dd& x) { return std::abs(x.hi); }
inline double log_mag(double x) { return std::log(std::abs(x)); }
inline double log_mag(const dd& x) { return log_abs(x); }
inline double scale2(double x, int e) { return std::ldexp(x, e); }
inline dd scale2(const dd& x, int e) { return ldexp(x, e); }
inline int sign_of(double x) { return x < 0.0 ? -1 : 1; }
inline int sign_of(const dd& x) {
    return (x.hi < 0.0 || (x.hi == 0.0 && x.lo < 0.0)) ? -1 : 1;
}
} // namespace detail

// In-place LU with partial pivoting. Returns permutation sign, 0 on exact
// singularity. piv[k] records the row swapped into position k.
template <class T>
int lu_decompose(Mat<T>& A, std::vector<int>& piv) {
    int n = A.n, sign = 1;
    piv.resize(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = detail::mag(A(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = detail::mag(A(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        piv[k] = p;
        if (best == 0.0) return 0;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            T f = A(i, k) / A(k, k);
            A(i, k) = f;
            for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
        }
    }
    return sign;
}

template <class T>
void lu_solve_inplace(const Mat<T>& LU, const std::vector<int>& piv,
                      std::vector<T>& b) {
    int n = LU.n;
    for (int k = 0; k < n; ++k) {
        if (piv[k] != k) std::swap(b[k], b[piv[k]]);
        for (int i = k + 1; i < n; ++i) b[i] -= LU(i, k) * b[k];
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= LU(i, j) * b[j];
        b[i] /= LU(i, i);
    }
}

// Power-of-two row then column equilibration; returns the log of the removed
// scale so determinants can be reconstituted.
template <class T>
double equilibrate(Mat<T>& A) {
    int n = A.n;
    double sum_e = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < n; ++i) {
            double big = 0.0;
            for (int j = 0; j < n; ++j) {
                big = std::max(big, detail::mag(pass == 0 ? A(i, j) : A(j, i)));
            }
            if (big == 0.0) continue;
            int e = std::ilogb(big);
            if (std::abs(e) < 2) continue;
            for (int j = 0; j < n; ++j) {
                if (pass == 0) {
                    A(i, j) = detail::scale2(A(i, j), -e);
                } else {
                    A(j, i) = detail::scale2(A(j, i), -e);
                }
            }
            sum_e += e;
        }
    }
    return sum_e * 0.6931471805599453094172321214581766;
}

template <class T>
LogScaled log_det_lu(Mat<T> A) {
    if (A.n == 0) return LogScaled::one();
    double logscale = equilibrate(A);
    std::vector<int> piv;
    int sign = lu_decompose(A, piv);
    if (sign == 0) return LogScaled::zero();
    double lm = logscale;
    for (int i = 0; i < A.n; ++i) {
        lm += detail::log_mag(A(i, i));
        sign *= detail::sign_of(A(i, i));
    }
    return LogScaled::from_log(lm, sign);
}

// log det via LU with equilibration; `scaled` switches to double-double
// elimination for ill-conditioned (Hankel moment) matrices.
LogScaled log_det(const Mat<double>& A, bool scaled = false);
LogScaled log_det(const Mat<dd>& A);

// tr(A^{-1} B) for square matrices, computed in double-double.
double trace_inv_times(const Mat<double>& A, const Mat<double>& B);

// Convenience conversion.
Mat<dd> widen(const Mat<double>& A);

} // namespace lue
