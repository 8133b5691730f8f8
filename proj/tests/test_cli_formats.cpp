#include <doctest.h>

#include "sphd/energy.hpp"
#include "sphd/experiments.hpp"
#include "sphd/pointsets.hpp"
#include "sphd/quality.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace sphd;

TEST_CASE("sweep csv round trip") {
    SweepTable table;
    table.meta["family"] = "jittered";
    table.meta["metric"] = "riesz-offdiag";
    table.meta["s"] = "1.5";
    table.rows.push_back({64, 0.12345678901234567, 0.001, 50});
    table.rows.push_back({128, 0.98765432109876543, 0.0005, 50});

    std::ostringstream os;
    table.write_csv(os);
    std::istringstream is(os.str());
    SweepTable back = SweepTable::read_csv(is);

    REQUIRE(back.rows.size() == 2);
    CHECK(back.meta == table.meta);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.rows[i].n == table.rows[i].n);
        CHECK(back.rows[i].mean == table.rows[i].mean); // %.17g is lossless
        CHECK(back.rows[i].stderr_ == table.rows[i].stderr_);
        CHECK(back.rows[i].trials == table.rows[i].trials);
    }
}

TEST_CASE("sweep csv requires the header line") {
    std::istringstream is("64,0.5,0.01,10\n");
    CHECK_THROWS_AS((void)SweepTable::read_csv(is), std::invalid_argument);
}

TEST_CASE("json reports parse and carry the right keys") {
    PointSet oct = fixture_octahedron();

    auto energy = nlohmann::json::parse(riesz_energy(oct, 1.0).to_json());
    CHECK(energy["value"].get<double>() ==
          doctest::Approx(12.0 / std::sqrt(2.0) + 1.5));
    CHECK(energy["normalization"] == "pairwise-half");
    CHECK(energy.contains("remainder_scaled"));

    auto cert = nlohmann::json::parse(design_defect(oct, 4).to_json());
    CHECK(cert["certified_t"].get<int>() == 3);
    CHECK(cert["defects"].size() == 4);
    CHECK(cert["t_checked"].get<int>() == 4);

    auto wce = nlohmann::json::parse(wce_sobolev(oct, 1.5).to_json());
    CHECK(wce["space"] == "sobolev");
    CHECK(wce["parameter"].get<double>() == 1.5);
    CHECK(wce["wce_squared"].get<double>() > 0.0);
    CHECK(wce["tail_bound"].get<double>() >= 0.0);
}

TEST_CASE("sweep and fit json forms") {
    SweepTable table;
    table.meta["metric"] = "riesz-offdiag";
    for (std::size_t n : {16ul, 32ul, 64ul, 128ul})
        table.rows.push_back({n, std::pow(static_cast<double>(n), -0.75), 0.0, 1});

    auto tj = nlohmann::json::parse(table.to_json());
    CHECK(tj["rows"].size() == 4);
    CHECK(tj["meta"]["metric"] == "riesz-offdiag");

    FitResult fit = fit_exponent(table, {}, false);
    auto fj = nlohmann::json::parse(fit.to_json());
    CHECK(fj["slope"].get<double>() == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(fj.contains("r_squared"));
    CHECK(fj.contains("slope_stderr"));

    CompareReport rep = compare_report(table, table);
    auto cj = nlohmann::json::parse(rep.to_json());
    CHECK(cj["verdict"] == "comparable");
    std::string text = rep.to_text();
    CHECK(text.find("verdict: comparable") != std::string::npos);
}
