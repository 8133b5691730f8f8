#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sphd {

// N points on S^d stored row-major, d+1 coordinates per point.
class PointSet {
public:
    PointSet(int d, std::vector<double> coords, std::string label = {});

    int dim() const { return d_; }
    int ambient() const { return d_ + 1; }
    std::size_t size() const { return coords_.size() / static_cast<std::size_t>(d_ + 1); }
    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(d_ + 1),
                static_cast<std::size_t>(d_ + 1)};
    }
    const std::vector<double>& coords() const { return coords_; }
    const std::string& label() const { return label_; }

    double inner(std::size_t i, std::size_t j) const;

private:
    int d_;
    std::vector<double> coords_;
    std::string label_;
};

struct Cap {
    std::vector<double> center; // unit vector in R^{d+1}
    double angular_radius = 0.0;
};

// sqrt(2 - 2<x,y>) with the inner product clamped to [-1, 1].
double chordal_distance(std::span<const double> x, std::span<const double> y);

double clamped_inner(std::span<const double> x, std::span<const double> y);

// Normalized area of a spherical cap of angular radius phi on S^d.
double cap_area(int d, double phi);

// Inverse of cap_area in phi (bisection).
double cap_angle(int d, double area);

// arccos(1 - c1^2 / (8 N^{2/d})); the separation-induced empty-cap radius.
double alpha_n(double c1, std::size_t n, int d);

// N i.i.d. uniform points on S^d from normalized Gaussian vectors.
// Fully determined by the seed (engine-independent Box-Muller).
PointSet uniform_sphere(int d, std::size_t n, std::uint64_t seed);

// Uniform point on S^{m} (ambient m+1) appended to out; used by samplers.
void append_uniform_direction(int m, std::uint64_t& rng_state, std::vector<double>& out);

// Standard normal deviate from a splitmix64 state (Box-Muller, one of the pair).
double gaussian(std::uint64_t& rng_state);
double uniform01(std::uint64_t& rng_state);

} // namespace sphd
