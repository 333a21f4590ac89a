#pragma once

#include <functional>
#include <vector>

namespace lue {

struct QuadRule {
    std::vector<double> x, w;
};

// Gauss-Legendre on [-1,1]; cached by order.
const QuadRule& gauss_legendre(int n);
// Gauss-Legendre mapped to [a,b].
QuadRule gauss_legendre_mapped(int n, double a, double b);
// Gauss-Jacobi on [0,1] with weight x^a (1-x)^b.
QuadRule gauss_jacobi01(int n, double a, double b);
// Generalized Gauss-Laguerre with weight x^alpha e^{-x} on [0,inf).
QuadRule gauss_laguerre(int n, double alpha);
void gauss_laguerre_rule(int n, double alpha, std::vector<double>& x,
                         std::vector<double>& w);

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 48);

// Fornberg weights: result[k][i] is the weight of node xs[i] in the
// approximation of the k-th derivative at z, for k = 0..m.
std::vector<std::vector<double>> fd_weights(double z,
                                            const std::vector<double>& xs,
                                            int m);

} // namespace lue
