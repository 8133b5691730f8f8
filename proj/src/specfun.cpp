#include "sphd/specfun.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace sphd {

namespace {

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

} // namespace

double pochhammer(double a, unsigned n) {
    if (n == 0) return 1.0;
    if (a > 0.0 && n > 24) {
        // log-space path, all factors positive
        return std::exp(log_pochhammer(a, n));
    }
    double p = 1.0;
    for (unsigned k = 0; k < n; ++k)
        p *= a + static_cast<double>(k);
    return p;
}

double log_pochhammer(double a, unsigned n) {
    if (a <= 0.0)
        throw std::domain_error("log_pochhammer: requires a > 0");
    return std::lgamma(a + static_cast<double>(n)) - std::lgamma(a);
}

double gamma_ratio(double n, double a, double b) {
    double u = n + a, v = n + b;
    if (is_nonpositive_integer(u) || is_nonpositive_integer(v))
        throw std::domain_error("gamma_ratio: argument at a pole of Gamma");
    if (u > 0.0 && v > 0.0)
        return std::exp(std::lgamma(u) - std::lgamma(v));
    // negative non-integer arguments stay at moderate magnitudes
    return std::tgamma(u) / std::tgamma(v);
}

double jacobi_eval(const JacobiParams& p, unsigned n, double x) {
    const double a = p.alpha, b = p.beta;
    if (a <= -1.0 || b <= -1.0)
        throw std::domain_error("jacobi_eval: requires alpha, beta > -1");
    if (n == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for (unsigned k = 2; k <= n; ++k) {
        double kk = static_cast<double>(k);
        double c1 = 2.0 * kk * (kk + a + b) * (2.0 * kk + a + b - 2.0);
        double c2 = (2.0 * kk + a + b - 1.0) * (a * a - b * b);
        double c3 = (2.0 * kk + a + b - 2.0) * (2.0 * kk + a + b - 1.0) * (2.0 * kk + a + b);
        double c4 = 2.0 * (kk + a - 1.0) * (kk + b - 1.0) * (2.0 * kk + a + b);
        double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double jacobi_derivative(const JacobiParams& p, unsigned n, double x) {
    if (n == 0) return 0.0;
    JacobiParams up{p.alpha + 1.0, p.beta + 1.0};
    return 0.5 * (p.alpha + p.beta + static_cast<double>(n) + 1.0) *
           jacobi_eval(up, n - 1, x);
}

double legendre_pnd(int d, unsigned n, double x) {
    if (d < 2)
        throw std::domain_error("legendre_pnd: requires d >= 2");
    if (n == 0) return 1.0;
    if (n == 1) return x;
    double pm1 = 1.0, pc = x;
    for (unsigned k = 1; k < n; ++k) {
        double kk = static_cast<double>(k);
        double pn = ((2.0 * kk + d - 1.0) * x * pc - kk * pm1) / (kk + d - 1.0);
        pm1 = pc;
        pc = pn;
    }
    return pc;
}

double zdim_real(int d, double ell) {
    if (ell == 0.0) return 1.0;
    return (2.0 * ell + d - 1.0) *
           std::exp(std::lgamma(ell + d - 1.0) - std::lgamma(static_cast<double>(d)) -
                    std::lgamma(ell + 1.0));
}

long long zdim(int d, unsigned ell) {
    if (d < 2)
        throw std::domain_error("zdim: requires d >= 2");
    if (ell == 0) return 1;
    return std::llround(zdim_real(d, static_cast<double>(ell)));
}

double riesz_expansion_coeff(int d, double s, int bigk, unsigned n) {
    const double lambda = 0.5 * d + bigk + 0.5;
    const double nn = static_cast<double>(n);
    // prefactor 2^{2 lambda - s/2} pi^{-1/2} Gamma(lambda) Gamma(lambda - s/2 + 1/2)
    double log_pref = (2.0 * lambda - 0.5 * s) * std::log(2.0) -
                      0.5 * std::log(M_PI) + std::lgamma(lambda) +
                      std::lgamma(lambda - 0.5 * s + 0.5);
    // (n+lambda) (s/2)_n (2 lambda)_n / (Gamma(n + 2 lambda - s/2 + 1) (lambda+1/2)_n)
    double log_num = std::log(nn + lambda);
    if (n > 0)
        log_num += log_pochhammer(0.5 * s, n) + log_pochhammer(2.0 * lambda, n) -
                   log_pochhammer(lambda + 0.5, n);
    double log_den = std::lgamma(nn + 2.0 * lambda - 0.5 * s + 1.0);
    return std::exp(log_pref + log_num - log_den);
}

namespace {

struct CoeffKey {
    int d;
    double s;
    int bigk;
    bool operator<(const CoeffKey& o) const {
        return std::tie(d, s, bigk) < std::tie(o.d, o.s, o.bigk);
    }
};

std::mutex g_coeff_mutex;
std::map<CoeffKey, std::shared_ptr<const ExpansionCoefficients>> g_coeff_cache;

} // namespace

std::shared_ptr<const ExpansionCoefficients>
riesz_expansion_coeffs(int d, double s, int bigk, unsigned n_max) {
    if (d < 2)
        throw std::invalid_argument("riesz_expansion_coeffs: requires d >= 2");
    if (!(s > 0.0 && s < static_cast<double>(d)))
        throw std::invalid_argument("riesz_expansion_coeffs: requires 0 < s < d");
    if (!(static_cast<double>(bigk) > 0.5 * d))
        throw std::invalid_argument("riesz_expansion_coeffs: requires K > d/2");

    CoeffKey key{d, s, bigk};
    std::lock_guard<std::mutex> lock(g_coeff_mutex);
    auto it = g_coeff_cache.find(key);
    if (it != g_coeff_cache.end() && it->second->coeffs.size() > n_max)
        return it->second;

    auto fresh = std::make_shared<ExpansionCoefficients>();
    fresh->d = d;
    fresh->s = s;
    fresh->bigk = bigk;
    fresh->lambda = 0.5 * d + bigk + 0.5;
    fresh->coeffs.resize(n_max + 1);
    for (unsigned n = 0; n <= n_max; ++n)
        fresh->coeffs[n] = riesz_expansion_coeff(d, s, bigk, n);
    g_coeff_cache[key] = fresh;
    return fresh;
}

} // namespace sphd
