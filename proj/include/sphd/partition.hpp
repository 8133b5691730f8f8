#pragma once

#include "sphd/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

namespace sphd {

// One region of a recursive zonal equal-area partition of S^d.
// For d >= 2 the cell is {(cos t, sin t * y) : t in [theta_lo, theta_hi],
// y in base}; a null base means the whole subsphere S^{d-1}.
// For d == 1 the interval is the azimuth range in [0, 2*pi].
struct Cell {
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    std::shared_ptr<const Cell> base;
    int index = 0;
};

struct Partition {
    int d = 0;
    std::size_t n = 0;
    std::vector<Cell> cells;
};

struct InnerCap {
    Cap cap;
    double scaled_radius = 0.0; // angular radius * N^{1/d}
};

// Recursive zonal equal-area partition: polar caps plus collars whose cell
// counts are rounded with a carried area remainder, collar boundaries then
// re-solved so every boundary area is an exact multiple of 1/N.
Partition eq_partition(int d, std::size_t n);

// Exact normalized measure of a cell from its product structure.
double cell_area(const Cell& cell, int d);

// Exact uniform draw from the cell: polar angle by inverse CDF of the
// sin^{d-1} density restricted to the interval, base by recursion.
std::vector<double> cell_sample(const Cell& cell, int d, std::uint64_t& rng_state);

// Chordal diameter of the cell (exact for the product structure).
double cell_diameter(const Cell& cell, int d);

// Largest cap centered at the cell midpoint that the construction certifies
// to be contained in the cell. Throws on zero-width cells.
InnerCap inner_cap(const Cell& cell, int d, std::size_t n);

bool cell_contains(const Cell& cell, int d, std::span<const double> p, double tol = 1e-9);

// One uniform draw from every cell, in index order, from a single stream.
PointSet jittered_sample(const Partition& part, std::uint64_t seed);

// Uniform draw from a spherical cap on S^d.
std::vector<double> cap_sample(const Cap& cap, int d, std::uint64_t& rng_state);

// Text serialization: one line per cell, theta-interval chain innermost-last.
void write_partition(std::ostream& os, const Partition& part);

} // namespace sphd
