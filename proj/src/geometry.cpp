#include "sphd/geometry.hpp"

#include "sphd/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace sphd {

PointSet::PointSet(int d, std::vector<double> coords, std::string label)
    : d_(d), coords_(std::move(coords)), label_(std::move(label)) {
    if (d_ < 1)
        throw std::invalid_argument("PointSet: requires d >= 1");
    std::size_t amb = static_cast<std::size_t>(d_ + 1);
    if (coords_.empty() || coords_.size() % amb != 0)
        throw std::invalid_argument("PointSet: coordinate count not a multiple of d+1");
    for (std::size_t i = 0; i < coords_.size(); i += amb) {
        double norm2 = 0.0;
        for (std::size_t k = 0; k < amb; ++k)
            norm2 += coords_[i + k] * coords_[i + k];
        if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
            throw std::invalid_argument("PointSet: point not on the unit sphere");
    }
}

double PointSet::inner(std::size_t i, std::size_t j) const {
    auto x = point(i), y = point(j);
    double t = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        t += x[k] * y[k];
    return t;
}

double clamped_inner(std::span<const double> x, std::span<const double> y) {
    double t = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        t += x[k] * y[k];
    if (t > 1.0) t = 1.0;
    if (t < -1.0) t = -1.0;
    return t;
}

double chordal_distance(std::span<const double> x, std::span<const double> y) {
    return std::sqrt(2.0 - 2.0 * clamped_inner(x, y));
}

double cap_area(int d, double phi) {
    if (d < 1)
        throw std::domain_error("cap_area: requires d >= 1");
    if (phi <= 0.0) return 0.0;
    if (phi >= M_PI) return 1.0;
    if (d == 1) return phi / M_PI; // arc pair measure used by the recursion base
    if (d == 2) return 0.5 * (1.0 - std::cos(phi));
    // ratio * int_0^phi sin^{d-1} theta dtheta, smooth integrand
    double ratio = std::exp(std::lgamma(0.5 * (d + 1)) - 0.5 * std::log(M_PI) -
                            std::lgamma(0.5 * d));
    double integral = adaptive_simpson(
        [d](double th) { return std::pow(std::sin(th), d - 1); }, 0.0, phi, 1e-14);
    double a = ratio * integral;
    return a < 0.0 ? 0.0 : (a > 1.0 ? 1.0 : a);
}

double cap_angle(int d, double area) {
    if (area <= 0.0) return 0.0;
    if (area >= 1.0) return M_PI;
    double lo = 0.0, hi = M_PI;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (cap_area(d, mid) < area)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

double alpha_n(double c1, std::size_t n, int d) {
    double arg = 1.0 - c1 * c1 / (8.0 * std::pow(static_cast<double>(n), 2.0 / d));
    if (arg < -1.0)
        throw std::domain_error("alpha_n: arccos argument below -1");
    if (arg > 1.0) arg = 1.0;
    return std::acos(arg);
}

double uniform01(std::uint64_t& rng_state) {
    return (splitmix64(rng_state) >> 11) * 0x1.0p-53;
}

double gaussian(std::uint64_t& rng_state) {
    // Box-Muller; one deviate per call keeps the stream stateless.
    double u1 = uniform01(rng_state);
    double u2 = uniform01(rng_state);
    while (u1 <= 0.0) u1 = uniform01(rng_state);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void append_uniform_direction(int m, std::uint64_t& rng_state, std::vector<double>& out) {
    int amb = m + 1;
    std::size_t base = out.size();
    double norm2 = 0.0;
    do {
        out.resize(base);
        norm2 = 0.0;
        for (int k = 0; k < amb; ++k) {
            double g = gaussian(rng_state);
            out.push_back(g);
            norm2 += g * g;
        }
    } while (norm2 < 1e-24);
    double inv = 1.0 / std::sqrt(norm2);
    for (int k = 0; k < amb; ++k)
        out[base + k] *= inv;
}

PointSet uniform_sphere(int d, std::size_t n, std::uint64_t seed) {
    if (n == 0)
        throw std::invalid_argument("uniform_sphere: requires N >= 1");
    std::uint64_t state = derive_seed(seed, 0xC0FFEEULL);
    std::vector<double> coords;
    coords.reserve(n * static_cast<std::size_t>(d + 1));
    for (std::size_t i = 0; i < n; ++i)
        append_uniform_direction(d, state, coords);
    return PointSet(d, std::move(coords), "uniform(seed=" + std::to_string(seed) + ")");
}

} // namespace sphd
