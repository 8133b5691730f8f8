#include "sphd/partition.hpp"

#include "sphd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace sphd {

namespace {

constexpr double TWO_PI = 6.283185307179586;

double unit_sphere_area(int d) {
    // unnormalized surface area of S^d in R^{d+1}
    return 2.0 * std::pow(M_PI, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

// polar angle theta such that the [0, theta] zone has normalized area `frac`,
// restricted inversion of cap_area
double zone_angle(int d, double frac) { return cap_angle(d, frac); }

Partition eq_circle(std::size_t n) {
    Partition part;
    part.d = 1;
    part.n = n;
    part.cells.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Cell c;
        c.theta_lo = TWO_PI * static_cast<double>(k) / static_cast<double>(n);
        c.theta_hi = TWO_PI * static_cast<double>(k + 1) / static_cast<double>(n);
        c.index = static_cast<int>(k);
        part.cells.push_back(c);
    }
    return part;
}

} // namespace

Partition eq_partition(int d, std::size_t n) {
    if (d < 1)
        throw std::invalid_argument("eq_partition: requires d >= 1");
    if (n == 0)
        throw std::invalid_argument("eq_partition: requires N >= 1");
    if (d == 1)
        return eq_circle(n);

    Partition part;
    part.d = d;
    part.n = n;

    if (n == 1) {
        Cell whole;
        whole.theta_lo = 0.0;
        whole.theta_hi = M_PI;
        whole.index = 0;
        part.cells.push_back(whole);
        return part;
    }
    if (n == 2) {
        Cell north{0.0, 0.5 * M_PI, nullptr, 0};
        Cell south{0.5 * M_PI, M_PI, nullptr, 1};
        part.cells = {north, south};
        return part;
    }

    const double nn = static_cast<double>(n);
    const double theta_c = zone_angle(d, 1.0 / nn);

    // collar layout: ideal collar height from the linear scale of one cell
    const double delta_ideal = std::pow(unit_sphere_area(d) / nn, 1.0 / d);
    int n_collars = std::max<int>(1, static_cast<int>(std::lround((M_PI - 2.0 * theta_c) / delta_ideal)));
    n_collars = std::min<int>(n_collars, static_cast<int>(n - 2));

    // ideal cell counts per collar, rounded with carried remainder
    std::vector<std::size_t> counts(n_collars, 0);
    {
        double delta_f = (M_PI - 2.0 * theta_c) / n_collars;
        double carry = 0.0;
        std::size_t assigned = 0;
        for (int i = 0; i < n_collars; ++i) {
            double a_lo = cap_area(d, theta_c + i * delta_f);
            double a_hi = cap_area(d, theta_c + (i + 1) * delta_f);
            double ideal = nn * (a_hi - a_lo);
            long long m = std::llround(ideal + carry);
            if (m < 1) m = 1;
            std::size_t remaining = n - 2 - assigned;
            if (static_cast<std::size_t>(m) > remaining - static_cast<std::size_t>(n_collars - 1 - i))
                m = static_cast<long long>(remaining - static_cast<std::size_t>(n_collars - 1 - i));
            if (i == n_collars - 1)
                m = static_cast<long long>(remaining);
            counts[i] = static_cast<std::size_t>(m);
            assigned += counts[i];
            carry += ideal - static_cast<double>(m);
        }
    }

    // boundaries re-solved so each one sits at an exact multiple of 1/N
    std::vector<double> bounds(n_collars + 1);
    {
        std::size_t cum = 1;
        bounds[0] = zone_angle(d, static_cast<double>(cum) / nn);
        for (int i = 0; i < n_collars; ++i) {
            cum += counts[i];
            bounds[i + 1] = zone_angle(d, static_cast<double>(cum) / nn);
        }
    }

    int index = 0;
    Cell north{0.0, bounds[0], nullptr, index++};
    part.cells.push_back(north);
    for (int i = 0; i < n_collars; ++i) {
        Partition sub = eq_partition(d - 1, counts[i]);
        for (const Cell& sc : sub.cells) {
            Cell c;
            c.theta_lo = bounds[i];
            c.theta_hi = bounds[i + 1];
            c.index = index++;
            // a single-cell subsphere imposes no azimuthal boundary
            if (!(sub.cells.size() == 1 && counts[i] == 1))
                c.base = std::make_shared<Cell>(sc);
            part.cells.push_back(c);
        }
    }
    Cell south{bounds[n_collars], M_PI, nullptr, index++};
    part.cells.push_back(south);
    return part;
}

double cell_area(const Cell& cell, int d) {
    if (d == 1)
        return (cell.theta_hi - cell.theta_lo) / TWO_PI;
    double zone = cap_area(d, cell.theta_hi) - cap_area(d, cell.theta_lo);
    double base_frac = cell.base ? cell_area(*cell.base, d - 1) : 1.0;
    return zone * base_frac;
}

std::vector<double> cell_sample(const Cell& cell, int d, std::uint64_t& rng_state) {
    if (d == 1) {
        double phi = cell.theta_lo + uniform01(rng_state) * (cell.theta_hi - cell.theta_lo);
        return {std::cos(phi), std::sin(phi)};
    }
    // polar inverse CDF: area fraction uniform between the interval endpoints
    double a_lo = cap_area(d, cell.theta_lo);
    double a_hi = cap_area(d, cell.theta_hi);
    double target = a_lo + uniform01(rng_state) * (a_hi - a_lo);
    double lo = cell.theta_lo, hi = cell.theta_hi;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (cap_area(d, mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13) break;
    }
    double theta = 0.5 * (lo + hi);

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(d + 1));
    out.push_back(std::cos(theta));
    double st = std::sin(theta);
    std::vector<double> basep;
    if (cell.base) {
        basep = cell_sample(*cell.base, d - 1, rng_state);
    } else {
        append_uniform_direction(d - 1, rng_state, basep);
    }
    for (double y : basep)
        out.push_back(st * y);
    return out;
}

namespace {

// min of cos(t1)cos(t2) + c sin(t1)sin(t2) over the box [lo,hi]^2, t in [0,pi]
double min_zone_inner(double lo, double hi, double c) {
    auto g = [c](double t1, double t2) {
        return std::cos(t1) * std::cos(t2) + c * std::sin(t1) * std::sin(t2);
    };
    double best = g(lo, lo);
    auto consider = [&](double t1, double t2) {
        if (t1 >= lo - 1e-15 && t1 <= hi + 1e-15 && t2 >= lo - 1e-15 && t2 <= hi + 1e-15)
            best = std::min(best, g(t1, t2));
    };
    const double cand1[] = {lo, hi, 0.5 * M_PI};
    for (double t1 : cand1) {
        if (t1 < lo || t1 > hi) continue;
        consider(t1, lo);
        consider(t1, hi);
        consider(t1, 0.5 * M_PI);
        // anti-phase minimum of the single-harmonic slice in t2
        double phi0 = std::atan2(c * std::sin(t1), std::cos(t1));
        for (double tstar : {phi0 + M_PI, phi0 - M_PI}) {
            consider(t1, tstar);
            consider(tstar, t1);
        }
    }
    return best;
}

} // namespace

double cell_diameter(const Cell& cell, int d) {
    if (d == 1) {
        double arc = cell.theta_hi - cell.theta_lo;
        return arc >= M_PI ? 2.0 : 2.0 * std::sin(0.5 * arc);
    }
    double base_diam = cell.base ? cell_diameter(*cell.base, d - 1) : 2.0;
    double c = 1.0 - 0.5 * base_diam * base_diam; // min base inner product
    double gmin = min_zone_inner(cell.theta_lo, cell.theta_hi, c);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * gmin));
}

namespace {

// geodesic margin of the base cell and its center direction
void base_center_and_margin(const Cell* base, int dm1, std::vector<double>& center,
                            double& margin) {
    if (base == nullptr) {
        center.assign(static_cast<std::size_t>(dm1 + 1), 0.0);
        center[0] = 1.0;
        margin = M_PI; // no azimuthal boundary
        return;
    }
    if (dm1 == 1) {
        double mid = 0.5 * (base->theta_lo + base->theta_hi);
        center = {std::cos(mid), std::sin(mid)};
        margin = 0.5 * (base->theta_hi - base->theta_lo);
        return;
    }
    std::vector<double> sub_center;
    double sub_margin;
    base_center_and_margin(base->base.get(), dm1 - 1, sub_center, sub_margin);
    double mid = 0.5 * (base->theta_lo + base->theta_hi);
    double polar_margin = 0.5 * (base->theta_hi - base->theta_lo);
    if (base->theta_lo <= 1e-15 && base->base == nullptr) {
        // north polar cap on the subsphere
        center.assign(static_cast<std::size_t>(dm1 + 1), 0.0);
        center[0] = 1.0;
        margin = base->theta_hi;
        return;
    }
    if (base->theta_hi >= M_PI - 1e-12 && base->base == nullptr) {
        // south polar cap on the subsphere
        center.assign(static_cast<std::size_t>(dm1 + 1), 0.0);
        center[0] = -1.0;
        margin = M_PI - base->theta_lo;
        return;
    }
    center.clear();
    center.push_back(std::cos(mid));
    for (double y : sub_center)
        center.push_back(std::sin(mid) * y);
    double smin = std::min(std::sin(base->theta_lo), std::sin(base->theta_hi));
    margin = std::min(polar_margin, sub_margin * smin);
}

} // namespace

InnerCap inner_cap(const Cell& cell, int d, std::size_t n) {
    if (!(cell.theta_hi > cell.theta_lo))
        throw std::invalid_argument("inner_cap: degenerate cell");
    InnerCap ic;
    double radius;
    std::vector<double>& center = ic.cap.center;

    if (d == 1) {
        double mid = 0.5 * (cell.theta_lo + cell.theta_hi);
        center = {std::cos(mid), std::sin(mid)};
        radius = 0.5 * (cell.theta_hi - cell.theta_lo);
    } else if (cell.base == nullptr && cell.theta_lo <= 1e-15) {
        center.assign(static_cast<std::size_t>(d + 1), 0.0);
        center[0] = 1.0;
        radius = cell.theta_hi;
    } else if (cell.base == nullptr && cell.theta_hi >= M_PI - 1e-12) {
        center.assign(static_cast<std::size_t>(d + 1), 0.0);
        center[0] = -1.0;
        radius = M_PI - cell.theta_lo;
    } else {
        double mid = 0.5 * (cell.theta_lo + cell.theta_hi);
        double polar_margin = 0.5 * (cell.theta_hi - cell.theta_lo);
        std::vector<double> bc;
        double bm;
        base_center_and_margin(cell.base.get(), d - 1, bc, bm);
        center.clear();
        center.push_back(std::cos(mid));
        for (double y : bc)
            center.push_back(std::sin(mid) * y);
        double smin = std::min(std::sin(cell.theta_lo), std::sin(cell.theta_hi));
        radius = std::min(polar_margin, bm * smin);
    }
    ic.cap.angular_radius = radius;
    ic.scaled_radius = radius * std::pow(static_cast<double>(n), 1.0 / d);
    return ic;
}

bool cell_contains(const Cell& cell, int d, std::span<const double> p, double tol) {
    if (d == 1) {
        double phi = std::atan2(p[1], p[0]);
        if (phi < 0.0) phi += TWO_PI;
        auto in = [&](double v) {
            return v >= cell.theta_lo - tol && v <= cell.theta_hi + tol;
        };
        return in(phi) || in(phi - TWO_PI) || in(phi + TWO_PI);
    }
    double c0 = std::clamp(p[0], -1.0, 1.0);
    double theta = std::acos(c0);
    if (theta < cell.theta_lo - tol || theta > cell.theta_hi + tol) return false;
    if (!cell.base) return true;
    double norm2 = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k)
        norm2 += p[k] * p[k];
    if (norm2 < 1e-20) return true; // at the pole the base coordinate is arbitrary
    double inv = 1.0 / std::sqrt(norm2);
    std::vector<double> y(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k)
        y[k - 1] = p[k] * inv;
    return cell_contains(*cell.base, d - 1, y, tol * 4.0);
}

PointSet jittered_sample(const Partition& part, std::uint64_t seed) {
    std::uint64_t state = derive_seed(seed, 0x9177E7ULL);
    std::vector<double> coords;
    coords.reserve(part.n * static_cast<std::size_t>(part.d + 1));
    for (const Cell& c : part.cells) {
        auto p = cell_sample(c, part.d, state);
        coords.insert(coords.end(), p.begin(), p.end());
    }
    return PointSet(part.d, std::move(coords),
                    "jittered(N=" + std::to_string(part.n) + ")");
}

std::vector<double> cap_sample(const Cap& cap, int d, std::uint64_t& rng_state) {
    // offset angle by inverse CDF of sin^{d-1} on [0, radius]
    double a_hi = cap_area(d, cap.angular_radius);
    double target = uniform01(rng_state) * a_hi;
    double rho = cap_angle(d, target);

    // random tangent direction at the center
    std::size_t amb = cap.center.size();
    std::vector<double> t(amb);
    double norm2 = 0.0;
    do {
        double dot = 0.0;
        for (std::size_t k = 0; k < amb; ++k) {
            t[k] = gaussian(rng_state);
            dot += t[k] * cap.center[k];
        }
        norm2 = 0.0;
        for (std::size_t k = 0; k < amb; ++k) {
            t[k] -= dot * cap.center[k];
            norm2 += t[k] * t[k];
        }
    } while (norm2 < 1e-20);
    double inv = 1.0 / std::sqrt(norm2);
    std::vector<double> out(amb);
    for (std::size_t k = 0; k < amb; ++k)
        out[k] = std::cos(rho) * cap.center[k] + std::sin(rho) * inv * t[k];
    return out;
}

namespace {

void write_cell_chain(std::ostream& os, const Cell* c) {
    while (c != nullptr) {
        os << ' ' << c->theta_lo << ' ' << c->theta_hi;
        c = c->base.get();
    }
}

} // namespace

void write_partition(std::ostream& os, const Partition& part) {
    os << "# eq-partition d=" << part.d << " N=" << part.n << "\n";
    for (const Cell& c : part.cells) {
        os << c.index;
        write_cell_chain(os, &c);
        os << "\n";
    }
}

} // namespace sphd
