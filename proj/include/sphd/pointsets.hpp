#pragma once

#include "sphd/geometry.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>

namespace sphd {

struct SeparationReport {
    double min_distance = 0.0;
    double c1_hat = 0.0; // min_distance * N^{1/d}
    std::size_t argmin_i = 0;
    std::size_t argmin_j = 0;
    bool duplicate_warning = false; // coincident points present
};

// Plain-text point format: d+1 whitespace-separated floats per row,
// '#' starts a comment. Rows must be unit vectors within 1e-6.
PointSet load_points(const std::string& path, int d);
PointSet read_points(std::istream& is, int d, const std::string& label);
void save_points(std::ostream& os, const PointSet& points);
void save_points(const std::string& path, const PointSet& points);

// Exact small configurations.
PointSet fixture_octahedron();
PointSet fixture_cube();
PointSet fixture_icosahedron();
PointSet fixture_cross_polytope(int d);
PointSet fixture_simplex(int d);
// Dispatch by name: octahedron, cube, icosahedron, cross_polytope(d), simplex(d).
PointSet fixture(const std::string& name);

// Spherical Fibonacci lattice on S^2.
PointSet fibonacci_sphere(std::size_t n);

// Exact O(N^2) minimum-distance scan.
SeparationReport separation(const PointSet& points);

struct MinimizeOptions {
    double s = 1.0;
    std::size_t steps = 500;
    double step_size = 1.0; // initial step, halved on any energy increase
    double grad_tol = 0.0;  // stop early when gradient norm falls below
};

// Projected gradient descent on the Riesz s-energy with backtracking;
// monotone in energy between accepted iterates.
PointSet riesz_minimize(const PointSet& start, const MinimizeOptions& opt);

} // namespace sphd
