#include <lue/linalg.hpp>

namespace lue {

Mat<dd> widen(const Mat<double>& A) {
    Mat<dd> B(A.n, A.m);
    for (size_t i = 0; i < A.a.size(); ++i) B.a[i] = dd(A.a[i]);
    return B;
}

LogScaled log_det(const Mat<double>& A, bool scaled) {
    if (scaled) return log_det_lu(widen(A));
    return log_det_lu(A);
}

LogScaled log_det(const Mat<dd>& A) { return log_det_lu(A); }

double trace_inv_times(const Mat<double>& A, const Mat<double>& B) {
    if (A.n != B.n || A.n != A.m) throw std::domain_error("trace_inv_times: square matrices required");
    Mat<dd> LU = widen(A);
    std::vector<int> piv;
    if (lu_decompose(LU, piv) == 0) throw std::runtime_error("trace_inv_times: singular matrix");
    dd tr(0.0);
    std::vector<dd> col(A.n);
    for (int j = 0; j < A.n; ++j) {
        for (int i = 0; i < A.n; ++i) col[i] = dd(B(i, j));
        lu_solve_inplace(LU, piv, col);
        tr += col[j];
    }
    return tr.to_double();
}

} // namespace lue
