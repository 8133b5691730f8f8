#include <doctest.h>

#include "sphd/energy.hpp"
#include "sphd/pointsets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

using namespace sphd;

namespace {

std::vector<double> pair_distances(const PointSet& pts) {
    std::vector<double> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            out.push_back(chordal_distance(pts.point(i), pts.point(j)));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("point file round trip keeps full precision") {
    PointSet pts = uniform_sphere(3, 37, 5);
    std::ostringstream os;
    save_points(os, pts);
    std::istringstream is(os.str());
    PointSet back = read_points(is, 3, "rt");
    REQUIRE(back.size() == pts.size());
    // the reader renormalizes, which may flip the last bit of a coordinate
    for (std::size_t i = 0; i < pts.coords().size(); ++i)
        CHECK(back.coords()[i] == doctest::Approx(pts.coords()[i]).epsilon(1e-15));
}

TEST_CASE("point file parsing errors") {
    {
        std::istringstream is("1 0 0\n0 1\n");
        CHECK_THROWS_AS((void)read_points(is, 2, "bad"), std::runtime_error);
    }
    {
        std::istringstream is("1 0 zero\n");
        CHECK_THROWS_AS((void)read_points(is, 2, "bad"), std::runtime_error);
    }
    {
        std::istringstream is("0.9 0 0\n"); // norm off by far more than 1e-6
        CHECK_THROWS_AS((void)read_points(is, 2, "bad"), std::runtime_error);
    }
    {
        std::istringstream is("# comment line\n1 0 0\n\n0 1 0\n");
        PointSet ok = read_points(is, 2, "ok");
        CHECK(ok.size() == 2);
    }
}

TEST_CASE("octahedron geometry") {
    PointSet oct = fixture_octahedron();
    REQUIRE(oct.size() == 6);
    auto dists = pair_distances(oct);
    REQUIRE(dists.size() == 15);
    for (int k = 0; k < 12; ++k)
        CHECK(dists[k] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    for (int k = 12; k < 15; ++k)
        CHECK(dists[k] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("cube and icosahedron fixtures") {
    PointSet cube = fixture_cube();
    REQUIRE(cube.size() == 8);
    SeparationReport cr = separation(cube);
    CHECK(cr.min_distance == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-13));

    PointSet ico = fixture_icosahedron();
    REQUIRE(ico.size() == 12);
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    double edge = 2.0 / std::sqrt(phi * std::sqrt(5.0));
    SeparationReport ir = separation(ico);
    CHECK(ir.min_distance == doctest::Approx(edge).epsilon(1e-12));
    // every vertex has exactly five nearest neighbours at the edge length
    auto dists = pair_distances(ico);
    std::size_t edges = 0;
    for (double v : dists)
        if (std::abs(v - edge) < 1e-9) ++edges;
    CHECK(edges == 30);
}

TEST_CASE("cross polytope and simplex in general dimension") {
    PointSet cp = fixture_cross_polytope(3);
    REQUIRE(cp.size() == 8);
    CHECK(cp.dim() == 3);
    SeparationReport sr = separation(cp);
    CHECK(sr.min_distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    for (int d : {2, 3, 4}) {
        PointSet sx = fixture_simplex(d);
        REQUIRE(sx.size() == static_cast<std::size_t>(d + 2));
        // regular simplex: all inner products equal -1/(d+1)
        for (std::size_t i = 0; i < sx.size(); ++i)
            for (std::size_t j = i + 1; j < sx.size(); ++j)
                CHECK(clamped_inner(sx.point(i), sx.point(j)) ==
                      doctest::Approx(-1.0 / (d + 1)).epsilon(1e-12));
    }
}

TEST_CASE("fixture dispatch by name") {
    CHECK(fixture("octahedron").size() == 6);
    CHECK(fixture("cube").size() == 8);
    CHECK(fixture("icosahedron").size() == 12);
    CHECK(fixture("cross_polytope(4)").size() == 10);
    CHECK(fixture("simplex(2)").size() == 4);
    CHECK_THROWS_AS((void)fixture("dodecahedron"), std::invalid_argument);
}

TEST_CASE("fibonacci lattice is well separated") {
    PointSet fib = fibonacci_sphere(1000);
    REQUIRE(fib.size() == 1000);
    for (std::size_t i = 0; i < fib.size(); ++i) {
        double norm2 = 0.0;
        for (double v : fib.point(i)) norm2 += v * v;
        CHECK(std::abs(norm2 - 1.0) <= 1e-12);
    }
    SeparationReport rep = separation(fib);
    CHECK(rep.c1_hat > 2.0);
    CHECK(rep.c1_hat < 4.0);
    CHECK_FALSE(rep.duplicate_warning);
}

TEST_CASE("separation flags coincident points") {
    PointSet dup(2, {1, 0, 0, 0, 1, 0, 1, 0, 0});
    SeparationReport rep = separation(dup);
    CHECK(rep.duplicate_warning);
    CHECK(rep.min_distance == doctest::Approx(0.0));
}

TEST_CASE("separation is rotation invariant") {
    PointSet pts = uniform_sphere(2, 200, 17);
    SeparationReport before = separation(pts);

    // random rotation via Gram-Schmidt on Gaussian columns
    std::uint64_t state = 9001;
    double q[3][3];
    for (int col = 0; col < 3; ++col) {
        std::vector<double> v;
        append_uniform_direction(2, state, v);
        for (int prev = 0; prev < col; ++prev) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += v[k] * q[prev][k];
            for (int k = 0; k < 3; ++k) v[k] -= dot * q[prev][k];
        }
        double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        for (int k = 0; k < 3; ++k) q[col][k] = v[k] / norm;
    }
    std::vector<double> rotated;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto p = pts.point(i);
        for (int col = 0; col < 3; ++col) {
            double val = 0.0;
            for (int k = 0; k < 3; ++k) val += q[col][k] * p[k];
            rotated.push_back(val);
        }
    }
    // renormalize against accumulated roundoff
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double norm = 0.0;
        for (int k = 0; k < 3; ++k) norm += rotated[3 * i + k] * rotated[3 * i + k];
        norm = std::sqrt(norm);
        for (int k = 0; k < 3; ++k) rotated[3 * i + k] /= norm;
    }
    SeparationReport after = separation(PointSet(2, rotated));
    CHECK(after.min_distance == doctest::Approx(before.min_distance).epsilon(1e-10));
}

TEST_CASE("gradient descent leaves the octahedron in place") {
    PointSet oct = fixture_octahedron();
    double e0 = riesz_energy(oct, 1.0).value;
    MinimizeOptions opt;
    opt.steps = 50;
    PointSet out = riesz_minimize(oct, opt);
    double e1 = riesz_energy(out, 1.0).value;
    CHECK(e1 <= e0 + 1e-12);
    CHECK(std::abs(e1 - e0) < 1e-10);
}

TEST_CASE("gradient descent decreases energy from a random start") {
    PointSet start = uniform_sphere(2, 30, 3);
    double e0 = riesz_energy(start, 1.0).value;
    MinimizeOptions opt;
    opt.steps = 200;
    PointSet out = riesz_minimize(start, opt);
    double e1 = riesz_energy(out, 1.0).value;
    CHECK(e1 < e0);
    SeparationReport rep = separation(out);
    CHECK(rep.min_distance > 0.2);
}

TEST_CASE("four points relax to the regular tetrahedron") {
    PointSet start = uniform_sphere(2, 4, 11);
    MinimizeOptions opt;
    opt.steps = 4000;
    PointSet out = riesz_minimize(start, opt);
    auto dists = pair_distances(out);
    for (double v : dists)
        CHECK(v == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-3));
}
