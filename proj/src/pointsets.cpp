#include "sphd/pointsets.hpp"

#include "sphd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace sphd {

namespace {

std::vector<double> normalize_rows(std::vector<double> coords, int amb) {
    for (std::size_t i = 0; i < coords.size(); i += amb) {
        double norm2 = 0.0;
        for (int k = 0; k < amb; ++k)
            norm2 += coords[i + k] * coords[i + k];
        double norm = std::sqrt(norm2);
        if (std::abs(norm - 1.0) > 1e-6)
            throw std::runtime_error("point row norm deviates from 1 by more than 1e-6");
        for (int k = 0; k < amb; ++k)
            coords[i + k] /= norm;
    }
    return coords;
}

} // namespace

PointSet read_points(std::istream& is, int d, const std::string& label) {
    const int amb = d + 1;
    std::vector<double> coords;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) {
            std::string tok;
            ls.clear();
            ls >> tok;
            throw std::runtime_error("non-numeric token '" + tok + "' at line " +
                                     std::to_string(lineno));
        }
        if (row.empty()) continue;
        if (static_cast<int>(row.size()) != amb)
            throw std::runtime_error("expected " + std::to_string(amb) +
                                     " columns at line " + std::to_string(lineno) +
                                     ", got " + std::to_string(row.size()));
        coords.insert(coords.end(), row.begin(), row.end());
    }
    if (coords.empty())
        throw std::runtime_error("no points in input");
    return PointSet(d, normalize_rows(std::move(coords), amb), label);
}

PointSet load_points(const std::string& path, int d) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open point file: " + path);
    return read_points(f, d, path);
}

void save_points(std::ostream& os, const PointSet& points) {
    os << std::setprecision(17);
    const int amb = points.ambient();
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto p = points.point(i);
        for (int k = 0; k < amb; ++k)
            os << (k ? " " : "") << p[k];
        os << "\n";
    }
}

void save_points(const std::string& path, const PointSet& points) {
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open output file: " + path);
    save_points(f, points);
}

PointSet fixture_octahedron() {
    std::vector<double> c;
    for (int k = 0; k < 3; ++k)
        for (double sgn : {1.0, -1.0}) {
            double v[3] = {0.0, 0.0, 0.0};
            v[k] = sgn;
            c.insert(c.end(), v, v + 3);
        }
    return PointSet(2, std::move(c), "octahedron");
}

PointSet fixture_cube() {
    std::vector<double> c;
    const double r = 1.0 / std::sqrt(3.0);
    for (double x : {r, -r})
        for (double y : {r, -r})
            for (double z : {r, -r})
                c.insert(c.end(), {x, y, z});
    return PointSet(2, std::move(c), "cube");
}

PointSet fixture_icosahedron() {
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    const double inv = 1.0 / std::sqrt(1.0 + phi * phi);
    std::vector<double> c;
    for (double a : {1.0, -1.0})
        for (double b : {phi, -phi}) {
            c.insert(c.end(), {0.0, a * inv, b * inv});
            c.insert(c.end(), {a * inv, b * inv, 0.0});
            c.insert(c.end(), {b * inv, 0.0, a * inv});
        }
    return PointSet(2, std::move(c), "icosahedron");
}

PointSet fixture_cross_polytope(int d) {
    if (d < 1)
        throw std::invalid_argument("cross_polytope: requires d >= 1");
    const int amb = d + 1;
    std::vector<double> c;
    for (int k = 0; k < amb; ++k)
        for (double sgn : {1.0, -1.0}) {
            std::vector<double> v(amb, 0.0);
            v[k] = sgn;
            c.insert(c.end(), v.begin(), v.end());
        }
    return PointSet(d, std::move(c), "cross_polytope(" + std::to_string(d) + ")");
}

PointSet fixture_simplex(int d) {
    if (d < 1)
        throw std::invalid_argument("simplex: requires d >= 1");
    const int amb = d + 1;  // d+2 vertices of the regular simplex in R^{d+1}
    const int n = d + 2;
    std::vector<double> c;
    // vertices e_k mapped so the centroid sits at the origin
    for (int k = 0; k < n; ++k) {
        std::vector<double> v(amb, 0.0);
        // standard construction: first n-1 vertices from scaled e_k, last vertex symmetric
        if (k < amb) {
            for (int j = 0; j < amb; ++j)
                v[j] = (j == k ? 1.0 : 0.0);
        } else {
            double t = (1.0 - std::sqrt(static_cast<double>(n))) / (n - 1.0);
            for (int j = 0; j < amb; ++j)
                v[j] = t;
        }
        c.insert(c.end(), v.begin(), v.end());
    }
    // center and normalize
    std::vector<double> mean(amb, 0.0);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < amb; ++j)
            mean[j] += c[k * amb + j] / n;
    for (int k = 0; k < n; ++k) {
        double norm2 = 0.0;
        for (int j = 0; j < amb; ++j) {
            c[k * amb + j] -= mean[j];
            norm2 += c[k * amb + j] * c[k * amb + j];
        }
        double invn = 1.0 / std::sqrt(norm2);
        for (int j = 0; j < amb; ++j)
            c[k * amb + j] *= invn;
    }
    return PointSet(d, std::move(c), "simplex(" + std::to_string(d) + ")");
}

PointSet fixture(const std::string& name) {
    if (name == "octahedron") return fixture_octahedron();
    if (name == "cube") return fixture_cube();
    if (name == "icosahedron") return fixture_icosahedron();
    auto paren = name.find('(');
    if (paren != std::string::npos && name.back() == ')') {
        std::string head = name.substr(0, paren);
        int d = std::stoi(name.substr(paren + 1, name.size() - paren - 2));
        if (head == "cross_polytope") return fixture_cross_polytope(d);
        if (head == "simplex") return fixture_simplex(d);
    }
    throw std::invalid_argument("unknown fixture: " + name);
}

PointSet fibonacci_sphere(std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("fibonacci_sphere: requires N >= 1");
    const double golden = 0.5 * (1.0 + std::sqrt(5.0));
    std::vector<double> c;
    c.reserve(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(n);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = 2.0 * M_PI * std::fmod(static_cast<double>(i) / golden, 1.0);
        c.insert(c.end(), {r * std::cos(phi), r * std::sin(phi), z});
    }
    return PointSet(2, std::move(c), "fibonacci(" + std::to_string(n) + ")");
}

SeparationReport separation(const PointSet& points) {
    const std::size_t n = points.size();
    if (n < 2)
        throw std::invalid_argument("separation: requires N >= 2");
    SeparationReport rep;
    rep.min_distance = 4.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto x = points.point(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            double dist = chordal_distance(x, points.point(j));
            if (dist < rep.min_distance) {
                rep.min_distance = dist;
                rep.argmin_i = i;
                rep.argmin_j = j;
            }
        }
    }
    rep.c1_hat = rep.min_distance *
                 std::pow(static_cast<double>(n), 1.0 / points.dim());
    rep.duplicate_warning = rep.min_distance < 1e-14;
    return rep;
}

namespace {

double riesz_value(const std::vector<double>& c, std::size_t n, int amb, double s) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d2 = 0.0;
            for (int k = 0; k < amb; ++k) {
                double diff = c[i * amb + k] - c[j * amb + k];
                d2 += diff * diff;
            }
            acc.add(std::pow(d2, -0.5 * s));
        }
    return acc.value();
}

} // namespace

PointSet riesz_minimize(const PointSet& start, const MinimizeOptions& opt) {
    const std::size_t n = start.size();
    const int amb = start.ambient();
    const double s = opt.s;
    if (!(s > 0.0 && s < start.dim()))
        throw std::invalid_argument("riesz_minimize: requires 0 < s < d");
    if (separation(start).min_distance < 1e-14)
        throw std::invalid_argument("riesz_minimize: coincident points in start");

    std::vector<double> x = start.coords();
    double energy = riesz_value(x, n, amb, s);
    double step = opt.step_size;
    std::vector<double> grad(x.size());
    std::vector<double> trial(x.size());

    for (std::size_t it = 0; it < opt.steps; ++it) {
        // gradient of the pair sum, then tangential projection
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double d2 = 0.0;
                for (int k = 0; k < amb; ++k) {
                    double diff = x[i * amb + k] - x[j * amb + k];
                    d2 += diff * diff;
                }
                double w = -s * std::pow(d2, -0.5 * s - 1.0);
                for (int k = 0; k < amb; ++k) {
                    double diff = x[i * amb + k] - x[j * amb + k];
                    grad[i * amb + k] += w * diff;
                    grad[j * amb + k] -= w * diff;
                }
            }
        double gnorm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double dot = 0.0;
            for (int k = 0; k < amb; ++k)
                dot += grad[i * amb + k] * x[i * amb + k];
            for (int k = 0; k < amb; ++k) {
                grad[i * amb + k] -= dot * x[i * amb + k];
                gnorm2 += grad[i * amb + k] * grad[i * amb + k];
            }
        }
        if (opt.grad_tol > 0.0 && std::sqrt(gnorm2) < opt.grad_tol) break;
        if (gnorm2 == 0.0) break;

        bool accepted = false;
        while (step > 1e-16) {
            double scale = step / std::sqrt(gnorm2) * std::sqrt(static_cast<double>(n));
            for (std::size_t i = 0; i < n; ++i) {
                double norm2 = 0.0;
                for (int k = 0; k < amb; ++k) {
                    trial[i * amb + k] = x[i * amb + k] - scale * grad[i * amb + k];
                    norm2 += trial[i * amb + k] * trial[i * amb + k];
                }
                double inv = 1.0 / std::sqrt(norm2);
                for (int k = 0; k < amb; ++k)
                    trial[i * amb + k] *= inv;
            }
            double trial_energy = riesz_value(trial, n, amb, s);
            if (trial_energy <= energy) {
                x.swap(trial);
                energy = trial_energy;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    return PointSet(start.dim(), std::move(x), start.label() + "+minimized");
}

} // namespace sphd
