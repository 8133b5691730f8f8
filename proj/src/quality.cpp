#include "sphd/quality.hpp"

#include "sphd/numerics.hpp"
#include "sphd/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <json.hpp>

namespace sphd {

namespace {

// Z(d, ell) for real ell, stable for arbitrarily large ell.
double zdim_large(int d, double ell) {
    if (ell == 0.0) return 1.0;
    if (ell < 1e6)
        return zdim_real(d, ell);
    // Gamma(x+d-1)/Gamma(x+1) = x^{d-2} (1 + (d-2)(d-1)/(2x) + O(x^{-2}))
    double ratio = std::pow(ell, d - 2) * (1.0 + (d - 2) * (d - 1.0) / (2.0 * ell));
    return (2.0 * ell + d - 1.0) * ratio / std::tgamma(static_cast<double>(d));
}

// sum_{ell >= from} f(ell) for a smooth positive f with polynomial-type decay:
// a direct block plus the midpoint-rule integral of the remainder.
double series_tail(const std::function<double(double)>& f, unsigned from) {
    const unsigned direct = 4000;
    CompensatedSum acc;
    for (unsigned ell = from; ell < from + direct; ++ell)
        acc.add(f(static_cast<double>(ell)));
    double b = static_cast<double>(from + direct) - 0.5;
    // int_b^inf f(x) dx with x = b/u
    double integral = tanh_sinh(
        [&](double, double da, double) {
            if (da <= 0.0) return 0.0;
            double x = b / da;
            if (!std::isfinite(x)) return 0.0;
            double v = f(x) * b / (da * da);
            return std::isfinite(v) ? v : 0.0;
        },
        0.0, 1.0, 1e-13);
    return acc.value() + integral;
}

double sobolev_weight(int /*d*/, double s, double lambda) {
    return std::pow(1.0 + lambda, -s);
}

double logspace_weight(int d, double gamma, double lambda) {
    return std::pow(1.0 + lambda, -0.5 * d) *
           std::pow(std::log(2.0 + lambda), -2.0 * gamma);
}

struct WceCore {
    double partial_offdiag = 0.0; // sum over unordered pairs of sum_{ell<=L} wz P_ell
    double bound_offdiag = 0.0;   // sum over unordered pairs of the tail bound
};

// Per-pair Legendre recurrence accumulating the weighted partial sum and the
// per-pair tail bound min(T_a, bernstein(theta) * T_b). Pairs are processed
// in fixed-size lanes so the degree loop vectorizes; lane layout depends only
// on the row-block partition, never on the thread count.
WceCore wce_pair_pass(const PointSet& points, const std::vector<double>& wz,
                      double tail_a, double tail_b, int threads) {
    const std::size_t n = points.size();
    const int d = points.dim();
    const int amb = points.ambient();
    const double* c = points.coords().data();
    const unsigned L = static_cast<unsigned>(wz.size()) - 1;
    const bool bernstein = d == 2 && tail_b > 0.0;

    // division-free recurrence: P_ell = ra[ell] * t * P_{ell-1} - rb[ell] * P_{ell-2}
    std::vector<double> ra(L + 1, 0.0), rb(L + 1, 0.0);
    for (unsigned ell = 2; ell <= L; ++ell) {
        double k = static_cast<double>(ell - 1);
        ra[ell] = (2.0 * k + d - 1.0) / (k + d - 1.0);
        rb[ell] = k / (k + d - 1.0);
    }

    constexpr std::size_t lanes = 64;

    auto sums = parallel_block_vsum(
        n, 32, threads, 2,
        [&](std::size_t, std::size_t lo, std::size_t hi, double* out) {
            CompensatedSum val, bnd;
            double tv[lanes];
            std::size_t fill = 0;
            auto flush = [&]() {
                if (fill == 0) return;
                double pm1[lanes], pc[lanes], acc[lanes];
                for (std::size_t q = fill; q < lanes; ++q) tv[q] = 0.0;
                for (std::size_t q = 0; q < lanes; ++q) {
                    pm1[q] = 1.0;
                    pc[q] = tv[q];
                    acc[q] = wz[1] * tv[q];
                }
                for (unsigned ell = 2; ell <= L; ++ell) {
                    double a = ra[ell], b = rb[ell], w = wz[ell];
                    for (std::size_t q = 0; q < lanes; ++q) {
                        double pn = a * tv[q] * pc[q] - b * pm1[q];
                        pm1[q] = pc[q];
                        pc[q] = pn;
                        acc[q] += w * pn;
                    }
                }
                for (std::size_t q = 0; q < fill; ++q) {
                    val.add(acc[q]);
                    double pair_bound = tail_a;
                    if (bernstein) {
                        double sin2 = 1.0 - tv[q] * tv[q];
                        if (sin2 > 0.0) {
                            double bern =
                                std::sqrt(2.0 / (M_PI * std::sqrt(sin2))) * tail_b;
                            pair_bound = std::min(pair_bound, bern);
                        }
                    }
                    bnd.add(pair_bound);
                }
                fill = 0;
            };
            for (std::size_t i = lo; i < hi; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    double t = 0.0;
                    for (int k = 0; k < amb; ++k)
                        t += c[i * amb + k] * c[j * amb + k];
                    if (t > 1.0) t = 1.0;
                    if (t < -1.0) t = -1.0;
                    tv[fill++] = t;
                    if (fill == lanes) flush();
                }
            flush();
            out[0] = val.value();
            out[1] = bnd.value();
        });
    return {sums[0], sums[1]};
}

using WeightFn = std::function<double(double lambda)>;

WceResult wce_compute(const PointSet& points, const WeightFn& weight,
                      const std::string& space, double param, double tol,
                      int threads, unsigned max_degree) {
    const int d = points.dim();
    const std::size_t n = points.size();
    const double nn = static_cast<double>(n);

    unsigned L = max_degree;
    if (L == 0) {
        // keep the pair pass near 3e9 inner-loop steps
        double budget = 3e9 / std::max(1.0, 0.5 * nn * nn);
        L = static_cast<unsigned>(std::clamp(budget, 800.0, 4000.0));
    }
    if (L < 2) L = 2;

    auto wz = std::vector<double>(L + 1, 0.0);
    for (unsigned ell = 1; ell <= L; ++ell) {
        double lam = static_cast<double>(ell) * (ell + d - 1.0);
        wz[ell] = weight(lam) * zdim_real(d, static_cast<double>(ell));
    }

    auto term = [&](double x) {
        double lam = x * (x + d - 1.0);
        return weight(lam) * zdim_large(d, x);
    };
    double tail_a = series_tail(term, L + 1);
    double tail_b = d == 2 ? series_tail([&](double x) { return term(x) / std::sqrt(x); },
                                         L + 1)
                           : 0.0;

    double diag_partial = 0.0; // sum_{ell<=L} wz[ell], P_ell(1) = 1
    {
        CompensatedSum acc;
        for (unsigned ell = 1; ell <= L; ++ell)
            acc.add(wz[ell]);
        diag_partial = acc.value();
    }

    WceResult res;
    res.space = space;
    res.parameter = param;
    res.truncation_degree = L;
    if (n == 1) {
        res.wce_squared = diag_partial + tail_a;
        res.tail_bound = 0.0;
        return res;
    }

    WceCore core = wce_pair_pass(points, wz, tail_a, tail_b, threads);
    res.wce_squared =
        (2.0 * core.partial_offdiag + nn * diag_partial) / (nn * nn) + tail_a / nn;
    res.tail_bound = 2.0 * core.bound_offdiag / (nn * nn);
    (void)tol;
    return res;
}

} // namespace

double sobolev_series_tail(int d, double s, unsigned from) {
    if (!(s > 0.5 * d))
        throw std::domain_error("sobolev_series_tail: requires s > d/2");
    return series_tail(
        [&](double x) {
            double lam = x * (x + d - 1.0);
            return sobolev_weight(d, s, lam) * zdim_large(d, x);
        },
        from);
}

double logspace_series_tail(int d, double gamma, unsigned from) {
    if (!(gamma > 0.5))
        throw std::domain_error("logspace_series_tail: requires gamma > 1/2");
    return series_tail(
        [&](double x) {
            double lam = x * (x + d - 1.0);
            return logspace_weight(d, gamma, lam) * zdim_large(d, x);
        },
        from);
}

WceResult wce_sobolev(const PointSet& points, double s, double tol, int threads,
                      unsigned max_degree) {
    const int d = points.dim();
    if (!(s > 0.5 * d))
        throw std::domain_error("wce_sobolev: requires s > d/2");
    return wce_compute(
        points, [d, s](double lam) { return sobolev_weight(d, s, lam); },
        "sobolev", s, tol, threads, max_degree);
}

WceResult wce_logspace(const PointSet& points, double gamma, double tol, int threads,
                       unsigned max_degree) {
    const int d = points.dim();
    if (!(gamma > 0.5))
        throw std::domain_error("wce_logspace: requires gamma > 1/2");
    return wce_compute(
        points, [d, gamma](double lam) { return logspace_weight(d, gamma, lam); },
        "logspace", gamma, tol, threads, max_degree);
}

DesignCertificate design_defect(const PointSet& points, int t, double tol,
                                int threads) {
    if (t < 1)
        throw std::invalid_argument("design_defect: requires t >= 1");
    const std::size_t n = points.size();
    const int d = points.dim();
    const int amb = points.ambient();
    const double* c = points.coords().data();
    const std::size_t dim = static_cast<std::size_t>(t);

    // per-degree off-diagonal sums of P_ell over unordered pairs
    std::vector<double> off(dim, 0.0);
    if (n > 1) {
        off = parallel_block_vsum(
            n, 32, threads, dim,
            [&](std::size_t, std::size_t lo, std::size_t hi, double* out) {
                std::vector<CompensatedSum> acc(dim);
                for (std::size_t i = lo; i < hi; ++i)
                    for (std::size_t j = i + 1; j < n; ++j) {
                        double x = 0.0;
                        for (int k = 0; k < amb; ++k)
                            x += c[i * amb + k] * c[j * amb + k];
                        if (x > 1.0) x = 1.0;
                        if (x < -1.0) x = -1.0;
                        double pm1 = 1.0, pc = x;
                        acc[0].add(pc);
                        for (std::size_t ell = 2; ell <= dim; ++ell) {
                            double k = static_cast<double>(ell - 1);
                            double pn =
                                ((2.0 * k + d - 1.0) * x * pc - k * pm1) / (k + d - 1.0);
                            pm1 = pc;
                            pc = pn;
                            acc[ell - 1].add(pc);
                        }
                    }
                for (std::size_t k = 0; k < dim; ++k)
                    out[k] = acc[k].value();
            });
    }

    DesignCertificate cert;
    cert.t_checked = t;
    cert.tol = tol;
    cert.defects.resize(dim);
    double nn = static_cast<double>(n);
    for (std::size_t ell = 1; ell <= dim; ++ell) {
        double z = zdim_real(d, static_cast<double>(ell));
        cert.defects[ell - 1] = z * (2.0 * off[ell - 1] + nn) / (nn * nn);
    }
    cert.certified_t = 0;
    for (std::size_t ell = 1; ell <= dim; ++ell) {
        if (cert.defects[ell - 1] <= tol)
            cert.certified_t = static_cast<int>(ell);
        else
            break;
    }
    return cert;
}

std::string DesignCertificate::to_json() const {
    nlohmann::json j;
    j["t_checked"] = t_checked;
    j["defects"] = defects;
    j["certified_t"] = certified_t;
    j["tol"] = tol;
    return j.dump(2);
}

std::string WceResult::to_json() const {
    nlohmann::json j;
    j["wce_squared"] = wce_squared;
    j["truncation_degree"] = truncation_degree;
    j["tail_bound"] = tail_bound;
    j["space"] = space;
    j["parameter"] = parameter;
    return j.dump(2);
}

} // namespace sphd
