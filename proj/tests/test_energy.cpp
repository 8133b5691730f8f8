#include <doctest.h>

#include "sphd/energy.hpp"
#include "sphd/pointsets.hpp"
#include "sphd/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace sphd;

TEST_CASE("octahedron riesz energies in closed form") {
    PointSet oct = fixture_octahedron();
    // 12 pairs at sqrt(2), 3 antipodal pairs at 2
    double e1 = 12.0 / std::sqrt(2.0) + 3.0 / 2.0;
    double e15 = 12.0 * std::pow(2.0, -0.75) + 3.0 * std::pow(2.0, -1.5);
    CHECK(riesz_energy(oct, 1.0).value == doctest::Approx(e1).epsilon(1e-14));
    CHECK(riesz_energy(oct, 1.5).value == doctest::Approx(e15).epsilon(1e-14));
}

TEST_CASE("antipodal pair and degenerate inputs") {
    PointSet pair(2, {0, 0, 1, 0, 0, -1});
    CHECK(riesz_energy(pair, 1.0).value == doctest::Approx(0.5).epsilon(1e-15));
    PointSet one(2, {1, 0, 0});
    CHECK(riesz_energy(one, 1.0).value == 0.0);
    PointSet dup(2, {1, 0, 0, 1, 0, 0});
    CHECK_THROWS_AS((void)riesz_energy(dup, 1.0), std::invalid_argument);
}

TEST_CASE("energy integral reference values") {
    CHECK(v_d(2, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    // d=2: V_2(s) = 2^{1-s}/(2-s)
    for (double s : {0.25, 0.5, 1.0, 1.5, 1.9})
        CHECK(v_d(2, s) ==
              doctest::Approx(std::pow(2.0, 1.0 - s) / (2.0 - s)).epsilon(1e-12));
}

TEST_CASE("independent quadratures and closed form agree") {
    for (int d : {2, 3, 4}) {
        for (double frac : {0.2, 0.5, 0.8, 0.95}) {
            double s = frac * d;
            double a = v_d(d, s);
            double b = v_d_second(d, s);
            double c = v_d_closed_form(d, s);
            CHECK(b == doctest::Approx(a).epsilon(1e-10));
            CHECK(c == doctest::Approx(a).epsilon(1e-12));
        }
    }
}

TEST_CASE("gamma-ratio expression only matches at s = d-1") {
    for (int d : {2, 3, 4})
        CHECK(v_d_gamma_ratio_form(d, d - 1.0) ==
              doctest::Approx(v_d(d, d - 1.0)).epsilon(1e-12));
    double dev = std::abs(v_d_gamma_ratio_form(2, 0.5) - v_d(2, 0.5));
    CHECK(dev > 0.29);
    CHECK(dev < 0.31);
}

TEST_CASE("coefficient kernels have exact means") {
    PointSet pts = uniform_sphere(2, 40, 21);
    // constant kernel: mean over all ordered pairs is the constant; the
    // off-diagonal variant keeps the N^2 normalization, so it loses 1/N
    auto flat = KernelSpec::coefficients(2, {1.0});
    double n = static_cast<double>(pts.size());
    CHECK(kernel_energy(pts, flat).value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(kernel_energy_offdiag(pts, flat).value ==
          doctest::Approx(1.0 - 1.0 / n).epsilon(1e-13));

    // K = P_1 = t: mean over ordered pairs is |N^{-1} sum x_i|^2
    auto linear = KernelSpec::coefficients(2, {0.0, 1.0});
    double mean[3] = {0, 0, 0};
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (int k = 0; k < 3; ++k) mean[k] += pts.point(i)[k] / pts.size();
    double want = mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2];
    CHECK(kernel_energy(pts, linear).value == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("off-diagonal mean is consistent with the pair energy") {
    PointSet pts = uniform_sphere(2, 33, 8);
    double n = static_cast<double>(pts.size());
    for (double s : {0.5, 1.0, 1.5}) {
        auto kernel = KernelSpec::riesz(2, s);
        double off = kernel_energy_offdiag(pts, kernel).value;
        double pairwise = riesz_energy(pts, s).value;
        CHECK(off * n * n == doctest::Approx(2.0 * pairwise).epsilon(1e-12));
        CHECK_THROWS_AS((void)kernel_energy(pts, kernel), std::invalid_argument);
    }
}

TEST_CASE("riesz report decomposition") {
    PointSet pts = uniform_sphere(2, 500, 4);
    auto rep = riesz_energy(pts, 1.5);
    double n = static_cast<double>(pts.size());
    CHECK(rep.leading_term == doctest::Approx(0.5 * v_d(2, 1.5) * n * n).epsilon(1e-13));
    CHECK(rep.remainder == doctest::Approx(rep.value - rep.leading_term));
    CHECK(rep.remainder_scaled ==
          doctest::Approx(rep.remainder / std::pow(n, 1.0 + 1.5 / 2.0)));
}

TEST_CASE("energy is rotation and thread-count invariant") {
    PointSet pts = uniform_sphere(2, 300, 2);
    auto serial = riesz_energy(pts, 1.0, 1);
    auto fourway = riesz_energy(pts, 1.0, 4);
    CHECK(serial.value == fourway.value); // bitwise, fixed block layout

    // rotate about the z axis by an irrational angle
    double a = 1.2345;
    std::vector<double> rot;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto p = pts.point(i);
        rot.push_back(std::cos(a) * p[0] - std::sin(a) * p[1]);
        rot.push_back(std::sin(a) * p[0] + std::cos(a) * p[1]);
        rot.push_back(p[2]);
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double norm = 0.0;
        for (int k = 0; k < 3; ++k) norm += rot[3 * i + k] * rot[3 * i + k];
        norm = std::sqrt(norm);
        for (int k = 0; k < 3; ++k) rot[3 * i + k] /= norm;
    }
    auto rotated = riesz_energy(PointSet(2, rot), 1.0);
    CHECK(rotated.value == doctest::Approx(serial.value).epsilon(1e-10));
}

TEST_CASE("partial sum plus tail reconstructs the power kernel") {
    for (int d : {2, 3}) {
        int bigk = d / 2 + 2;
        for (double s : {0.5, 1.0, 1.5}) {
            for (double x : {-0.9, -0.3, 0.0, 0.5, 0.9}) {
                double want = std::pow(2.0 - 2.0 * x, -0.5 * s);
                double h = h_t_eval(d, s, bigk, 200, x);
                double r = r_t_eval(d, s, bigk, 200, x);
                CHECK(h + r == doctest::Approx(want).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("degree-zero partial sum is the mean coefficient") {
    auto c = riesz_expansion_coeffs(2, 1.0, 3, 0);
    double want = std::pow(2.0, -0.5) * c->coeffs[0];
    CHECK(h_t_eval(2, 1.0, 3, 0, 0.37) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("tail evaluation rejects the expansion endpoints") {
    CHECK_THROWS_AS((void)r_t_eval(2, 1.0, 3, 10, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)r_t_eval(2, 1.0, 3, 10, -1.0), std::domain_error);
}

TEST_CASE("tail decays as the cutoff grows") {
    double prev = 1e30;
    for (unsigned t : {25u, 50u, 100u, 200u}) {
        double r = std::abs(r_t_eval(2, 1.0, 3, t, 0.2));
        CHECK(r < prev);
        prev = r;
    }
    CHECK(prev < 1e-4);
}
