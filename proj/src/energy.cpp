#include "sphd/energy.hpp"

#include "sphd/numerics.hpp"
#include "sphd/specfun.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <json.hpp>

namespace sphd {

KernelSpec KernelSpec::coefficients(int d, std::vector<double> a) {
    for (double c : a)
        if (c < 0.0)
            throw std::invalid_argument("KernelSpec: negative Legendre coefficient");
    KernelSpec k;
    k.kind = Kind::Coefficients;
    k.d = d;
    k.coeffs = std::move(a);
    return k;
}

KernelSpec KernelSpec::riesz(int d, double s) {
    if (!(s > 0.0 && s < static_cast<double>(d)))
        throw std::invalid_argument("KernelSpec: riesz requires 0 < s < d");
    KernelSpec k;
    k.kind = Kind::Riesz;
    k.d = d;
    k.s = s;
    return k;
}

KernelSpec KernelSpec::custom_radial(int d, std::function<double(double)> f,
                                     bool singular_at_one) {
    KernelSpec k;
    k.kind = Kind::Radial;
    k.d = d;
    k.radial = std::move(f);
    k.radial_singular = singular_at_one;
    return k;
}

bool KernelSpec::singular() const {
    switch (kind) {
        case Kind::Coefficients: return false;
        case Kind::Riesz: return true;
        case Kind::Radial: return radial_singular;
    }
    return false;
}

double KernelSpec::eval(double t) const {
    switch (kind) {
        case Kind::Coefficients: {
            if (coeffs.empty()) return 0.0;
            // one pass of the Legendre recurrence over all coefficients
            double acc = coeffs[0];
            if (coeffs.size() == 1) return acc;
            double pm1 = 1.0, pc = t;
            acc += coeffs[1] * pc;
            for (std::size_t n = 2; n < coeffs.size(); ++n) {
                double k = static_cast<double>(n - 1);
                double pn = ((2.0 * k + d - 1.0) * t * pc - k * pm1) / (k + d - 1.0);
                pm1 = pc;
                pc = pn;
                acc += coeffs[n] * pc;
            }
            return acc;
        }
        case Kind::Riesz: {
            double d2 = 2.0 - 2.0 * t;
            if (s == 1.0) return 1.0 / std::sqrt(d2);
            if (s == 2.0) return 1.0 / d2;
            return std::pow(d2, -0.5 * s);
        }
        case Kind::Radial:
            return radial(t);
    }
    return 0.0;
}

namespace {

std::mutex g_vd_mutex;
std::map<std::pair<int, double>, double> g_vd_cache;

double cached_v_d(int d, double s) {
    std::lock_guard<std::mutex> lock(g_vd_mutex);
    auto key = std::make_pair(d, s);
    auto it = g_vd_cache.find(key);
    if (it != g_vd_cache.end()) return it->second;
    double v = v_d(d, s);
    g_vd_cache[key] = v;
    return v;
}

const char* normalization_name(EnergyNormalization n) {
    switch (n) {
        case EnergyNormalization::PairwiseHalf: return "pairwise-half";
        case EnergyNormalization::MeanSquared: return "mean-squared";
        case EnergyNormalization::OffdiagMean: return "offdiag-mean";
    }
    return "?";
}

} // namespace

double KernelSpec::constant_term() const {
    switch (kind) {
        case Kind::Coefficients: return coeffs.empty() ? 0.0 : coeffs[0];
        case Kind::Riesz: return cached_v_d(d, s);
        case Kind::Radial:
            throw std::invalid_argument("KernelSpec: no constant term for a radial map");
    }
    return 0.0;
}

std::string EnergyReport::to_json() const {
    nlohmann::json j;
    j["value"] = value;
    j["normalization"] = normalization_name(normalization);
    j["leading_term"] = leading_term;
    j["remainder"] = remainder;
    j["remainder_scaled"] = remainder_scaled;
    return j.dump(2);
}

EnergyReport riesz_energy(const PointSet& points, double s, int threads) {
    const int d = points.dim();
    if (!(s > 0.0))
        throw std::invalid_argument("riesz_energy: requires s > 0");
    const std::size_t n = points.size();
    const int amb = points.ambient();
    const double* c = points.coords().data();
    std::atomic<bool> coincident{false};

    // half-sum over ordered pairs = plain sum over unordered pairs
    double value = parallel_block_sum(
        n, 64, threads,
        [&](std::size_t, std::size_t lo, std::size_t hi) {
            CompensatedSum acc;
            for (std::size_t i = lo; i < hi; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    double d2 = 0.0;
                    for (int k = 0; k < amb; ++k) {
                        double diff = c[i * amb + k] - c[j * amb + k];
                        d2 += diff * diff;
                    }
                    if (d2 < 1e-28) {
                        coincident.store(true, std::memory_order_relaxed);
                        continue;
                    }
                    acc.add(std::pow(d2, -0.5 * s));
                }
            return acc.value();
        });
    if (coincident.load())
        throw std::invalid_argument("riesz_energy: coincident points give infinite energy");

    EnergyReport rep;
    rep.value = value;
    rep.normalization = EnergyNormalization::PairwiseHalf;
    double nn = static_cast<double>(n);
    if (s < static_cast<double>(d)) {
        // asymptotic decomposition exists only below the critical exponent
        rep.leading_term = 0.5 * cached_v_d(d, s) * nn * nn;
        rep.remainder = rep.value - rep.leading_term;
        rep.remainder_scaled = rep.remainder / std::pow(nn, 1.0 + s / d);
    }
    return rep;
}

double v_d(int d, double s) {
    if (d < 2)
        throw std::domain_error("v_d: requires d >= 2");
    if (!(s > 0.0 && s < static_cast<double>(d)))
        throw std::domain_error("v_d: requires 0 < s < d");
    double cd = std::exp(std::lgamma(0.5 * (d + 1)) - 0.5 * std::log(M_PI) -
                         std::lgamma(0.5 * d));
    // integrable singularities at both endpoints; da = t+1, db = 1-t
    double integral = tanh_sinh(
        [d, s](double, double da, double db) {
            return std::pow(2.0 * db, -0.5 * s) * std::pow(da * db, 0.5 * d - 1.0);
        },
        -1.0, 1.0, 1e-13);
    return cd * integral;
}

double v_d_second(int d, double s) {
    if (d < 2)
        throw std::domain_error("v_d_second: requires d >= 2");
    if (!(s > 0.0 && s < static_cast<double>(d)))
        throw std::domain_error("v_d_second: requires 0 < s < d");
    double cd = std::exp(std::lgamma(0.5 * (d + 1)) - 0.5 * std::log(M_PI) -
                         std::lgamma(0.5 * d));
    // polar-angle form int_0^pi (2 sin(theta/2))^{-s} sin^{d-1}(theta) dtheta,
    // with theta = u^p chosen so the integrand vanishes like u^2 at u = 0
    double p = 3.0 / (d - s);
    double upper = std::pow(M_PI, 1.0 / p);
    auto g = [d, s, p](double u) {
        if (u <= 0.0) return 0.0;
        double theta = std::pow(u, p);
        if (theta >= M_PI) theta = M_PI;
        double sin_half = std::sin(0.5 * theta);
        double sin_full = std::sin(theta);
        if (sin_full <= 0.0) return 0.0;
        double lg = (p - 1.0) * std::log(u) - s * std::log(2.0 * sin_half) +
                    (d - 1.0) * std::log(sin_full);
        return p * std::exp(lg);
    };
    return cd * adaptive_simpson(g, 0.0, upper, 1e-13);
}

double v_d_closed_form(int d, double s) {
    if (!(s > 0.0 && s < static_cast<double>(d)))
        throw std::domain_error("v_d_closed_form: requires 0 < s < d");
    return std::exp((d - s - 1.0) * std::log(2.0) + std::lgamma(0.5 * (d + 1)) +
                    std::lgamma(0.5 * (d - s)) - 0.5 * std::log(M_PI) -
                    std::lgamma(d - 0.5 * s));
}

double v_d_gamma_ratio_form(int d, double s) {
    if (!(s > 0.0 && s < static_cast<double>(d)))
        throw std::domain_error("v_d_gamma_ratio_form: requires 0 < s < d");
    return std::exp(std::lgamma(0.5 * (d + 1)) + std::lgamma(d - s) -
                    std::lgamma(d - s + 1.0) - std::lgamma(d - 0.5 * s));
}

namespace {

EnergyReport pair_mean(const PointSet& points, const KernelSpec& kernel,
                       bool include_diagonal, int threads) {
    if (kernel.d != points.dim())
        throw std::invalid_argument("kernel_energy: kernel dimension mismatch");
    const std::size_t n = points.size();
    const int amb = points.ambient();
    const double* c = points.coords().data();
    const bool singular = kernel.singular();
    std::atomic<bool> coincident{false};

    double offdiag = parallel_block_sum(
        n, 64, threads,
        [&](std::size_t, std::size_t lo, std::size_t hi) {
            CompensatedSum acc;
            for (std::size_t i = lo; i < hi; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    double t = 0.0;
                    for (int k = 0; k < amb; ++k)
                        t += c[i * amb + k] * c[j * amb + k];
                    if (t > 1.0) t = 1.0;
                    if (t < -1.0) t = -1.0;
                    if (singular && t > 1.0 - 1e-14) {
                        coincident.store(true, std::memory_order_relaxed);
                        continue;
                    }
                    acc.add(kernel.eval(t));
                }
            return acc.value();
        });
    if (coincident.load())
        throw std::invalid_argument("kernel energy: coincident points with a singular kernel");

    double nn = static_cast<double>(n);
    EnergyReport rep;
    if (include_diagonal) {
        rep.value = (2.0 * offdiag + nn * kernel.eval(1.0)) / (nn * nn);
        rep.normalization = EnergyNormalization::MeanSquared;
    } else {
        rep.value = 2.0 * offdiag / (nn * nn);
        rep.normalization = EnergyNormalization::OffdiagMean;
    }
    rep.leading_term =
        kernel.kind == KernelSpec::Kind::Radial ? 0.0 : kernel.constant_term();
    rep.remainder = rep.value - rep.leading_term;
    if (kernel.kind == KernelSpec::Kind::Riesz)
        rep.remainder_scaled = rep.remainder / std::pow(nn, kernel.s / kernel.d - 1.0);
    return rep;
}

} // namespace

EnergyReport kernel_energy(const PointSet& points, const KernelSpec& kernel,
                           int threads) {
    if (kernel.singular())
        throw std::invalid_argument(
            "kernel_energy: kernel singular at 1, use the offdiag variant");
    return pair_mean(points, kernel, true, threads);
}

EnergyReport kernel_energy_offdiag(const PointSet& points, const KernelSpec& kernel,
                                   int threads) {
    return pair_mean(points, kernel, false, threads);
}

namespace {

// Walks P_n^{(a,a)}(x) through the degree recurrence.
struct JacobiWalker {
    double a, x;
    unsigned n = 0;
    double pm1 = 0.0, pc = 1.0;

    JacobiWalker(double alpha, double xx) : a(alpha), x(xx) {}
    double current() const { return pc; }
    void step() {
        ++n;
        if (n == 1) {
            pm1 = pc;
            pc = (a + 1.0) * x;
            return;
        }
        double k = static_cast<double>(n);
        double c1 = 2.0 * k * (k + 2.0 * a) * (2.0 * k + 2.0 * a - 2.0);
        double c3 =
            (2.0 * k + 2.0 * a - 2.0) * (2.0 * k + 2.0 * a - 1.0) * (2.0 * k + 2.0 * a);
        double c4 = 2.0 * (k + a - 1.0) * (k + a - 1.0) * (2.0 * k + 2.0 * a);
        double pn = (c3 * x * pc - c4 * pm1) / c1;
        pm1 = pc;
        pc = pn;
    }
};

} // namespace

double h_t_eval(int d, double s, int bigk, unsigned t, double x) {
    auto coeffs = riesz_expansion_coeffs(d, s, bigk, t);
    JacobiWalker w(coeffs->jacobi_alpha(), x);
    CompensatedSum acc;
    acc.add(coeffs->coeffs[0]);
    for (unsigned n = 1; n <= t; ++n) {
        w.step();
        acc.add(coeffs->coeffs[n] * w.current());
    }
    return std::pow(2.0, -0.5 * s) * acc.value();
}

double r_t_eval(int d, double s, int bigk, unsigned t, double x, double tol) {
    if (!(std::abs(x) < 1.0))
        throw std::domain_error("r_t_eval: requires |x| < 1");
    unsigned n_max = std::max(2 * t + 200, 2000u);
    auto coeffs = riesz_expansion_coeffs(d, s, bigk, n_max);
    JacobiWalker w(coeffs->jacobi_alpha(), x);
    CompensatedSum acc;
    unsigned quiet = 0;
    unsigned n = 0;
    while (true) {
        if (n > t) {
            double term = coeffs->coeffs[n] * w.current();
            acc.add(term);
            // polynomially decaying terms: a long run of negligible ones
            // certifies the truncation
            if (std::abs(term) < 0.01 * tol)
                ++quiet;
            else
                quiet = 0;
            if (quiet >= 40 && n > t + 60) break;
        }
        if (n == n_max) {
            if (n_max >= 400000)
                throw std::runtime_error("r_t_eval: tail did not certify, x too close to 1");
            n_max *= 2;
            coeffs = riesz_expansion_coeffs(d, s, bigk, n_max);
        }
        w.step();
        ++n;
    }
    return std::pow(2.0, -0.5 * s) * acc.value();
}

} // namespace sphd
