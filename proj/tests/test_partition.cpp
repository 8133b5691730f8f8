#include <doctest.h>

#include "sphd/numerics.hpp"
#include "sphd/partition.hpp"

#include <cmath>
#include <sstream>
#include <vector>

using namespace sphd;

TEST_CASE("tiny partitions") {
    Partition whole = eq_partition(2, 1);
    REQUIRE(whole.cells.size() == 1);
    CHECK(cell_area(whole.cells[0], 2) == doctest::Approx(1.0));
    CHECK(cell_diameter(whole.cells[0], 2) == doctest::Approx(2.0));

    Partition hemi = eq_partition(2, 2);
    REQUIRE(hemi.cells.size() == 2);
    for (const auto& c : hemi.cells) {
        CHECK(cell_area(c, 2) == doctest::Approx(0.5));
        CHECK(cell_diameter(c, 2) == doctest::Approx(2.0));
    }
    // inscribed cap of a hemisphere: radius pi/2 at the pole
    InnerCap cap = inner_cap(hemi.cells[0], 2, 2);
    CHECK(cap.cap.angular_radius == doctest::Approx(M_PI / 2).epsilon(1e-9));
}

TEST_CASE("cell areas are exactly 1/N") {
    for (int d : {2, 3}) {
        for (std::size_t n : {100ul, 1000ul}) {
            Partition part = eq_partition(d, n);
            REQUIRE(part.cells.size() == n);
            CompensatedSum total;
            for (const auto& c : part.cells) {
                double a = cell_area(c, d);
                CHECK(std::abs(a * n - 1.0) <= 1e-9);
                total.add(a);
            }
            CHECK(std::abs(total.value() - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("diameters scale like N^{-1/d}") {
    Partition part = eq_partition(2, 400);
    double worst = 0.0;
    for (const auto& c : part.cells)
        worst = std::max(worst, cell_diameter(c, 2));
    CHECK(worst * std::sqrt(400.0) <= 7.0);

    // constant bounded across a sweep, no monotone growth
    for (int d : {2, 3}) {
        std::vector<double> scaled;
        for (std::size_t n : {100ul, 1000ul, 10000ul}) {
            Partition p = eq_partition(d, n);
            double w = 0.0;
            for (const auto& c : p.cells) w = std::max(w, cell_diameter(c, d));
            scaled.push_back(w * std::pow(static_cast<double>(n), 1.0 / d));
        }
        for (double v : scaled) {
            CHECK(v < 10.0);
            CHECK(v > 1.0);
        }
    }
}

TEST_CASE("diameter never undershoots sampled pair distances") {
    Partition part = eq_partition(2, 100);
    std::uint64_t state = 4242;
    for (std::size_t idx : {0ul, 7ul, 33ul, 50ul, 99ul}) {
        const Cell& cell = part.cells[idx];
        double diam = cell_diameter(cell, 2);
        double sampled = 0.0;
        std::vector<std::vector<double>> draws;
        for (int k = 0; k < 60; ++k) draws.push_back(cell_sample(cell, 2, state));
        for (std::size_t a = 0; a < draws.size(); ++a)
            for (std::size_t b = a + 1; b < draws.size(); ++b)
                sampled = std::max(sampled, chordal_distance(draws[a], draws[b]));
        CHECK(diam >= sampled - 1e-9);
        CHECK(diam <= 3.0 * sampled + 1e-6); // not wildly conservative
    }
}

TEST_CASE("cell samples stay inside their cell") {
    std::uint64_t state = 31337;
    for (int d : {2, 3}) {
        Partition part = eq_partition(d, 60);
        for (std::size_t idx = 0; idx < part.cells.size(); idx += 7) {
            const Cell& cell = part.cells[idx];
            for (int k = 0; k < 500; ++k) {
                auto p = cell_sample(cell, d, state);
                CHECK(cell_contains(cell, d, p));
            }
        }
    }
}

TEST_CASE("cell sampling is uniform within a cell") {
    // quarter the cell into equal-measure regions: polar split at the
    // area median, base arc split at its midpoint (equal arc measure)
    Partition part = eq_partition(2, 16);
    const Cell* collar = nullptr;
    for (const auto& c : part.cells)
        if (c.base) {
            collar = &c;
            break;
        }
    REQUIRE(collar != nullptr);

    Cell lower = *collar;
    double lo = collar->theta_lo, hi = collar->theta_hi;
    double full = cell_area(*collar, 2);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        lower.theta_hi = mid;
        if (cell_area(lower, 2) < 0.5 * full)
            lo = mid;
        else
            hi = mid;
    }
    double theta_med = 0.5 * (lo + hi);
    double phi_mid = 0.5 * (collar->base->theta_lo + collar->base->theta_hi);

    std::uint64_t state = 2024;
    int counts[4] = {0, 0, 0, 0};
    const int draws = 10000;
    for (int k = 0; k < draws; ++k) {
        auto p = cell_sample(*collar, 2, state);
        double theta = std::acos(std::clamp(p[0], -1.0, 1.0));
        double phi = std::atan2(p[2], p[1]);
        if (phi < 0.0) phi += 2.0 * M_PI;
        int q = (theta > theta_med ? 2 : 0) + (phi > phi_mid ? 1 : 0);
        ++counts[q];
    }
    double chi2 = 0.0;
    for (int q = 0; q < 4; ++q) {
        double diff = counts[q] - draws / 4.0;
        chi2 += diff * diff / (draws / 4.0);
    }
    CHECK(chi2 < 16.27); // 3 dof, p = 0.001
}

TEST_CASE("whole-sphere cell sampling matches uniform moments") {
    Partition whole = eq_partition(2, 1);
    std::uint64_t state = 555;
    const int n = 100000;
    double mean[3] = {0, 0, 0}, second[3] = {0, 0, 0};
    for (int k = 0; k < n; ++k) {
        auto p = cell_sample(whole.cells[0], 2, state);
        for (int i = 0; i < 3; ++i) {
            mean[i] += p[i] / n;
            second[i] += p[i] * p[i] / n;
        }
    }
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(mean[i]) < 0.02);
        CHECK(second[i] == doctest::Approx(1.0 / 3.0).epsilon(0.05));
    }
}

TEST_CASE("inner caps are nonvanishing and inside their cells") {
    for (int d : {2, 3}) {
        for (std::size_t n : {100ul, 1000ul}) {
            Partition part = eq_partition(d, n);
            double min_scaled = 1e9;
            for (const auto& c : part.cells) {
                InnerCap cap = inner_cap(c, d, n);
                CHECK(cap.cap.angular_radius > 0.0);
                min_scaled = std::min(min_scaled, cap.scaled_radius);
            }
            CHECK(min_scaled > 0.1);
        }
    }
    // rejection check: cap draws land in the cell
    Partition part = eq_partition(2, 77);
    std::uint64_t state = 808;
    for (std::size_t idx = 0; idx < part.cells.size(); idx += 11) {
        InnerCap cap = inner_cap(part.cells[idx], 2, 77);
        for (int k = 0; k < 300; ++k) {
            auto p = cap_sample(cap.cap, 2, state);
            CHECK(cell_contains(part.cells[idx], 2, p, 1e-7));
        }
    }
}

TEST_CASE("jittered sampling is reproducible and covers every cell") {
    Partition part = eq_partition(2, 200);
    PointSet a = jittered_sample(part, 12);
    PointSet b = jittered_sample(part, 12);
    CHECK(a.coords() == b.coords());
    CHECK(a.size() == 200);
    for (std::size_t i = 0; i < part.cells.size(); ++i)
        CHECK(cell_contains(part.cells[i], 2, a.point(i)));
    PointSet c = jittered_sample(part, 13);
    CHECK(a.coords() != c.coords());
}

TEST_CASE("partition serialization is line per cell") {
    Partition part = eq_partition(2, 9);
    std::ostringstream os;
    write_partition(os, part);
    std::istringstream is(os.str());
    std::string line;
    std::size_t data_lines = 0, comment_lines = 0;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] == '#')
            ++comment_lines;
        else if (!line.empty())
            ++data_lines;
    }
    CHECK(comment_lines >= 1);
    CHECK(data_lines == 9);
}
