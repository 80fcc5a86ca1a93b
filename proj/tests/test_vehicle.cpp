#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "dlsrr/error.hpp"
#include "dlsrr/vehicle.hpp"

using namespace dlsrr;
using namespace dlsrr::vehicle;
using doctest::Approx;

namespace fs = std::filesystem;

TEST_CASE("rocket drag lookup") {
    const auto& t = rocket30_drag();
    CHECK(cd_lookup(t, 1.0) == 0.380);
    CHECK(cd_lookup(t, 1.125) == Approx(0.406));
    CHECK(cd_lookup(t, 12.0) == 0.131);
    CHECK(cd_lookup(t, 0.0) == 0.265);
    CHECK_THROWS_AS(cd_lookup(t, -0.1), DomainError);
}

TEST_CASE("drag tables are exact at knots and bracketed between them") {
    for (const auto* t : {&rocket30_drag(), &hpv_drag(), &europrojectile_drag()}) {
        CAPTURE(t->name());
        const auto knots = t->knots();
        for (std::size_t i = 0; i < knots.size(); ++i) {
            CHECK(cd_lookup(*t, knots[i].mach) == knots[i].cd);
            if (i + 1 < knots.size()) {
                for (double w : {0.1, 0.5, 0.9}) {
                    const double m = knots[i].mach + w * (knots[i + 1].mach - knots[i].mach);
                    const double cd = cd_lookup(*t, m);
                    CHECK(cd >= std::min(knots[i].cd, knots[i + 1].cd));
                    CHECK(cd <= std::max(knots[i].cd, knots[i + 1].cd));
                }
            }
        }
    }
}

TEST_CASE("bundled table shapes") {
    CHECK(rocket30_drag().knots().size() == 36);
    CHECK(rocket30_drag().knots().back().mach == 9.0);
    CHECK(hpv_drag().knots().back().mach == 8.0);
    CHECK(europrojectile_drag().knots()[29].mach == 7.5);
    CHECK(builtin_drag_table("hpv").has_value());
    CHECK_FALSE(builtin_drag_table("unknown").has_value());
}

TEST_CASE("drag table validation") {
    CHECK_THROWS_AS(DragTable({{0.5, 0.2}}), ValidationError);
    CHECK_THROWS_AS(DragTable({{0.5, 0.2}, {0.5, 0.3}}), ValidationError);
    CHECK_THROWS_AS(DragTable({{0.5, 0.2}, {1.0, 0.0}}), ValidationError);
    CHECK_THROWS_AS(DragTable({{1.0, 0.2}, {0.5, 0.3}}), ValidationError);
}

TEST_CASE("drag table file") {
    const auto path = fs::temp_directory_path() / "dlsrr_test_drag.txt";
    {
        std::ofstream out(path);
        out << "# mach cd\n0.5 0.30\n\n1.0 0.40  # peak\n2.0 0.25\n";
    }
    const auto t = load_drag_table(path.string());
    CHECK(t.knots().size() == 3);
    CHECK(t.lookup(1.5) == Approx(0.325));
    {
        std::ofstream out(path);
        out << "0.5 0.30\n1.0 abc\n";
    }
    try {
        load_drag_table(path.string());
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    fs::remove(path);
    CHECK_THROWS_AS(load_drag_table("/nonexistent/drag.txt"), IoError);
}

TEST_CASE("tsiolkovsky gain") {
    CHECK(tsiolkovsky_gain(2100.0, 0.5) == Approx(1455.7).epsilon(0.1 / 1455.7));
    CHECK(tsiolkovsky_gain(2100.0, 0.5) == Approx(2100.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(tsiolkovsky_gain(2600.0, 0.5) == Approx(1802.2).epsilon(1e-4));
    CHECK(tsiolkovsky_gain(2100.0, 0.0) == 0.0);
    CHECK(tsiolkovsky_gain(4200.0, 0.3) == Approx(2.0 * tsiolkovsky_gain(2100.0, 0.3)));
    double prev = 0.0;
    for (double fp = 0.05; fp < 0.95; fp += 0.05) {
        const double g = tsiolkovsky_gain(2100.0, fp);
        CHECK(g > prev);
        prev = g;
    }
    CHECK_THROWS_AS(tsiolkovsky_gain(2100.0, 1.0), DomainError);
    CHECK_THROWS_AS(tsiolkovsky_gain(0.0, 0.5), DomainError);
}

TEST_CASE("europrojectile mass") {
    CHECK(europrojectile_mass(0.075, 11000.0) == Approx(16.5).epsilon(0.1 / 16.5));
    CHECK(europrojectile_mass(0.10, 11000.0) == Approx(39.05));
    CHECK(europrojectile_mass(0.0, 11000.0) == 0.0);
    const auto v = europrojectile_volumes(1.0);
    CHECK(v.tail + v.body + v.nose == Approx(v.total).epsilon(0.005));
    CHECK(v.total == kEuroprojectileVolume);
}

TEST_CASE("presets") {
    const auto r = dlsrr30(30.0);
    CHECK(r.total_mass == 300.0);
    CHECK(r.propellant_mass() == 150.0);
    CHECK(r.dry_mass() == 150.0);
    CHECK(r.frontal_area() == Approx(0.0706858));
    CHECK(r.mass_flow() == 5.0);
    CHECK(hpv().mass == 11.4);
    CHECK(europrojectile().diameter == 0.075);
}

TEST_CASE("rocket validation names the field") {
    auto r = dlsrr30(30.0);
    r.propellant_fraction = 1.2;
    try {
        r.validate();
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("propellant_fraction") != std::string::npos);
    }
    r = dlsrr30(0.0);
    CHECK_THROWS_AS(r.validate(), ValidationError);
}

TEST_CASE("burn rate") {
    const auto records = load_propellants(std::string(DLSRR_SOURCE_DIR) + "/data/propellants.dat");
    CHECK(records.size() == 20);
    const PropellantRecord* ap = nullptr;
    const PropellantRecord* an = nullptr;
    for (const auto& r : records) {
        if (r.name.find("70% AP") != std::string::npos) ap = &r;
        if (r.name == "20% Binder, 72% AN, 8% MgAl") an = &r;
    }
    REQUIRE(ap);
    REQUIRE(an);
    CHECK(burn_rate(*ap, 40.0) == 6.5);
    CHECK(burn_rate(*ap, 80.0) == Approx(8.29).epsilon(0.01 / 8.29));
    CHECK(burn_rate(*an, 10.0) == Approx(1.0));
    CHECK(ap->flame_temperature == Approx(3153.15));
    for (const auto& r : records) {
        if (r.has_burn_rate()) CHECK(burn_rate(r, r.reference_pressure) == *r.burn_rate_ref);
        else CHECK_THROWS_AS(burn_rate(r, 40.0), UnsupportedRecordError);
    }
}

TEST_CASE("propellant parser") {
    const auto recs = parse_propellants("# c\nX | 2000 | 2100 | NA | 40 | NA\nY|1500|2000|2.5|40|0.4\n");
    REQUIRE(recs.size() == 2);
    CHECK_FALSE(recs[0].burn_rate_ref.has_value());
    CHECK(recs[1].exponent == Approx(0.4));
    CHECK_THROWS_AS(parse_propellants("X | 2000 | 2100\n"), ParseError);
    CHECK_THROWS_AS(parse_propellants("X | hot | 2100 | NA | 40 | NA\n"), ParseError);
}
