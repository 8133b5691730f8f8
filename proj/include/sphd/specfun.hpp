#pragma once

#include <memory>
#include <vector>

namespace sphd {

struct JacobiParams {
    double alpha; // > -1
    double beta;  // > -1
};

// Pochhammer symbol (a)_n = a(a+1)...(a+n-1), (a)_0 = 1.
double pochhammer(double a, unsigned n);
// log of (a)_n for a > 0 (stable for large n).
double log_pochhammer(double a, unsigned n);

// Gamma(n+a) / Gamma(n+b) via log-gamma differencing.
// Throws std::domain_error if either argument is a non-positive integer.
double gamma_ratio(double n, double a, double b);

// Jacobi polynomial P_n^{(alpha,beta)}(x), normalized so that
// P_n^{(alpha,alpha... )}(1) = binom(n+alpha, n). Three-term recurrence in degree.
double jacobi_eval(const JacobiParams& p, unsigned n, double x);

// d/dx P_n^{(alpha,beta)}(x) = (alpha+beta+n+1)/2 * P_{n-1}^{(alpha+1,beta+1)}(x).
double jacobi_derivative(const JacobiParams& p, unsigned n, double x);

// Generalized Legendre polynomial on S^d, normalized by P_n^{(d)}(1) = 1.
double legendre_pnd(int d, unsigned n, double x);

// Dimension of the space of degree-ell spherical harmonics on S^d.
long long zdim(int d, unsigned ell);
double zdim_real(int d, double ell);

// Coefficients c_n of (1-x)^{-s/2} = sum_n c_n P_n^{(lambda-1/2,lambda-1/2)}(x)
// with lambda = d/2 + K + 1/2. Global prefactor folded into each c_n.
struct ExpansionCoefficients {
    int d = 0;
    double s = 0.0;
    int bigk = 0;
    double lambda = 0.0;
    std::vector<double> coeffs; // index n = 0..n_max

    double jacobi_alpha() const { return lambda - 0.5; }
};

// Throws std::invalid_argument unless K > d/2 and 0 < s < d.
// Results are cached per (d, s, K); extending n_max reuses the cache.
std::shared_ptr<const ExpansionCoefficients>
riesz_expansion_coeffs(int d, double s, int bigk, unsigned n_max);

// Single coefficient c_n of the expansion above, computed in log space.
double riesz_expansion_coeff(int d, double s, int bigk, unsigned n);

} // namespace sphd
