#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dlsrr/error.hpp"
#include "dlsrr/scenario.hpp"

using namespace dlsrr;
using namespace dlsrr::scenario;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = DLSRR_SOURCE_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("dlsrr_test_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

constexpr const char* kVehicles = "[rocket]\npreset = dlsrr30\nburn_time = 30\n[projectile]\npreset = europrojectile\n";

std::string with_vehicles(const std::string& rest) { return kVehicles + rest; }

constexpr const char* kMinimal = R"(
[rocket]
preset = dlsrr30
burn_time = 30
[projectile]
preset = europrojectile
[launch]
altitude = 12000
speed = 500
angle = 54
)";

int parse_error_line(const std::string& text) {
    try {
        parse_scenario(with_vehicles(text));
    } catch (const ParseError& e) {
        return e.line() - 5;
    }
    return -1;
}

}  // namespace

TEST_CASE("minimal scenario is the 12 km baseline") {
    const auto s = parse_scenario(kMinimal);
    CHECK(s.release_altitude == 12000.0);
    CHECK(s.release_speed == 500.0);
    CHECK(s.firing_angle == 54.0);
    CHECK(s.rocket.burn_time == 30.0);
    CHECK(s.rocket.total_mass == 300.0);
    CHECK(s.projectile.mass == Approx(16.5).epsilon(0.01));
    CHECK(s.dt == 0.1);
    CHECK(s.qk == thermal::QkModel::klein);
    CHECK(s.stations == thermal::default_stations());
    CHECK_FALSE(s.needs_optimization());
    CHECK(s.drag_enabled);
    CHECK(s.thrust_enabled);
}

TEST_CASE("comments and whitespace") {
    const auto s = parse_scenario(with_vehicles("; header\n[launch]   \n  altitude = 16000  # m\nspeed=600\n\n"));
    CHECK(s.release_altitude == 16000.0);
    CHECK(s.release_speed == 600.0);
    CHECK(s.needs_optimization());
}

TEST_CASE("missing angle asks for optimization") {
    const auto s = parse_scenario(with_vehicles("[launch]\naltitude = 12000\nspeed = 500\n[run]\nangle_grid = 40:70:2\n"));
    CHECK(s.needs_optimization());
    CHECK(s.angle_grid.size() == 16);
    const auto l = parse_scenario(with_vehicles("[launch]\naltitude = 12000\nspeed = 500\n[run]\nangle_grid = 45, 50, 55\n"));
    CHECK(l.angle_grid == std::vector<double>{45.0, 50.0, 55.0});
}

TEST_CASE("validation errors") {
    const std::string kBadFraction =
        "[rocket]\nmass = 300\ndiameter = 0.3\npropellant_fraction = 1.2\nexhaust_velocity = 2100\n"
        "burn_time = 30\ndrag = rocket30\n[projectile]\npreset = hpv\n[launch]\naltitude = 1\nspeed = 1\n";
    CHECK_THROWS_AS(parse_scenario(kBadFraction),
                    ValidationError);
    try {
        parse_scenario(kBadFraction);
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("propellant_fraction") != std::string::npos);
    }
    try {
        parse_scenario(with_vehicles("[launch]\naltitude = 12000\n"));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()) == "missing required field [launch] speed");
    }
    CHECK_THROWS_AS(parse_scenario(with_vehicles("[launch]\naltitude = 12000\nspeed = 500\nangle = 95\n")), ValidationError);
    CHECK_THROWS_AS(parse_scenario(with_vehicles("[launch]\naltitude = 12000\nspeed = 500\n[run]\ndt = 0\n")), ValidationError);
}

TEST_CASE("parse errors carry the line") {
    CHECK(parse_error_line("[launch]\naltitude = 1\nspeed = 1\ncolour = red\n") == 4);
    CHECK(parse_error_line("[launch]\naltitude = 1\n[engine]\n") == 3);
    CHECK(parse_error_line("[launch]\naltitude = 1\naltitude = 2\n") == 3);
    CHECK(parse_error_line("[launch]\naltitude = 12 km\n") == 2);
    CHECK(parse_error_line("[launch]\naltitude\n") == 2);
    CHECK(parse_error_line("altitude = 1\n") == 1);
    CHECK(parse_error_line("[launch]\naltitude = 1\nspeed = 1\n[run]\nqk = fay\n") == 5);
    CHECK(parse_error_line("[launch]\naltitude = 1\nspeed = 1\n[run]\ndrag = maybe\n") == 5);
}

TEST_CASE("emit round-trips") {
    for (const char* name : {"europrojectile_16km.ini", "hpv_12km_optimize.ini", "inline_rocket.ini",
                             "vacuum.ini", "sweep.ini", "tables.ini"}) {
        CAPTURE(name);
        const auto path = kSource / "data" / "scenarios" / name;
        const auto s = load_scenario(path);
        const auto again = parse_scenario(emit(s), path.parent_path());
        CHECK(again == s);
        CHECK(emit(again) == emit(s));
    }
    auto s = parse_scenario(kMinimal);
    s.dt = 0.1 / 3.0;
    s.rocket.exhaust_velocity = 2100.123456789012;
    CHECK(parse_scenario(emit(s)) == s);
}

TEST_CASE("thermal stations and sweep") {
    const auto s = parse_scenario(std::string(kMinimal) +
                                  "[thermal]\nstations = stagnation, cone:0.05, cylinder\n"
                                  "stagnation_emissivity = 0.8\n"
                                  "[sweep]\naltitudes = 12000, 16000\nspeeds = 500\nburn_times = 30, 80\n");
    REQUIRE(s.stations.size() == 3);
    CHECK(s.stations[0].emissivity == 0.8);
    CHECK(s.stations[1].y == 0.05);
    CHECK(s.stations[2].kind == thermal::StationKind::cylinder_base);
    REQUIRE(s.sweep.has_value());
    CHECK(s.sweep->burn_times == std::vector<double>{30.0, 80.0});
}

TEST_CASE("reference tables") {
    const auto t = parse_reference("@table demo\n@columns a b c\n@inputs a\n@tolerance b rel 0.02\n"
                                   "@tolerance c abs 5\n@bound e max 10\n@note hello world\n1 2 3\n# x\n4 5 6\n");
    CHECK(t.name == "demo");
    CHECK(t.rows.size() == 2);
    CHECK(t.at(1, "c") == 6.0);
    CHECK(t.attributes.at("note") == "hello world");
    CHECK(t.tolerances.at("b").accepts(100.0, 101.9));
    CHECK_FALSE(t.tolerances.at("b").accepts(100.0, 102.1));
    CHECK(t.tolerances.at("c").accepts(50.0, 45.0));
    CHECK(t.bounds.at("e").max == 10.0);
    CHECK_THROWS_AS(t.column("z"), ValidationError);
    CHECK_THROWS_AS(parse_reference("@columns a b\n1 2 3\n"), ParseError);
    CHECK_THROWS_AS(parse_reference("@columns a b\n@tolerance z abs 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_reference("@columns a b\n@tolerance a near 1\n"), ParseError);
    CHECK_THROWS_AS(parse_reference("@columns a b\n1 x\n"), ParseError);

    const auto perf = load_reference(kSource / "data" / "reference" / "performance.dat");
    CHECK(perf.rows.size() == 15);
    CHECK(perf.attributes.at("kind") == "performance");
}

TEST_CASE("vacuum scenario matches the closed form") {
    TempDir tmp;
    const auto s = load_scenario(kSource / "data" / "scenarios" / "vacuum.ini");
    const auto r = run(Subcommand::ascent, s, tmp.path);
    const double vy = 1000.0 * std::sin(M_PI / 4.0);
    REQUIRE(r.ascent.has_value());
    CHECK(r.ascent->apogee_altitude == Approx(10000.0 + vy * vy / (2.0 * flight::kGravity)).epsilon(1e-3));
    CHECK(r.ascent->drag_loss == 0.0);
    CHECK(r.ascent->velocity_gain == 0.0);
    CHECK(fs::exists(tmp.path / "ascent.csv"));
    CHECK(fs::exists(tmp.path / "report.json"));
}

TEST_CASE("impact run: 16 km Europrojectile") {
    TempDir tmp;
    const auto s = load_scenario(kSource / "data" / "scenarios" / "europrojectile_16km.ini");
    const auto r = run(Subcommand::impact, s, tmp.path);
    REQUIRE(r.impact.has_value());
    CHECK(r.impact->range == Approx(361000.0).epsilon(0.02));
    CHECK(r.impact->impact_speed == Approx(1675.0).epsilon(0.02));
    CHECK(r.files == std::vector<std::string>{"ascent.csv", "descent.csv", "report.json"});
    CHECK(slurp(tmp.path / "descent.csv").rfind("t,x,y,vx,vy,", 0) == 0);
    const auto json = slurp(tmp.path / "report.json");
    CHECK(json.find("\"subcommand\": \"impact\"") != std::string::npos);
}

TEST_CASE("thermal run writes the station series") {
    TempDir tmp;
    auto s = parse_scenario(kMinimal);
    const auto r = run(Subcommand::thermal, s, tmp.path);
    REQUIRE(r.thermal.has_value());
    CHECK(r.thermal->stations.size() == 5);
    CHECK(r.thermal->final_cylinder_temperature > 293.15);
    CHECK(r.thermal->cylinder_energy < 9.9e5);
    CHECK(slurp(tmp.path / "thermal.csv").rfind("t,T_stag,", 0) == 0);
}

TEST_CASE("optimized run records the angle scan") {
    TempDir tmp;
    auto s = parse_scenario(with_vehicles("[launch]\naltitude = 12000\nspeed = 500\n[run]\nangle_grid = 50:60:5\n"));
    const auto r = run(Subcommand::ascent, s, tmp.path);
    CHECK(r.optimized);
    CHECK(fs::exists(tmp.path / "angles.csv"));
    CHECK(std::count(r.files.begin(), r.files.end(), "angles.csv") == 1);
    REQUIRE(r.ascent.has_value());
    CHECK((r.ascent->firing_angle == 50.0 || r.ascent->firing_angle == 55.0 || r.ascent->firing_angle == 60.0));
}

TEST_CASE("sweep run") {
    TempDir tmp;
    auto s = parse_scenario(std::string(kMinimal) +
                            "[sweep]\naltitudes = 12000\nspeeds = 500, 600\nburn_times = 30\n");
    s.angle_grid = {54.0};
    const auto r = run(Subcommand::sweep, s, tmp.path);
    CHECK(r.sweep.size() == 2);
    for (const auto& c : r.sweep) CHECK(c.ok);
    CHECK(fs::exists(tmp.path / "sweep.csv"));
    s.sweep.reset();
    CHECK_THROWS_AS(run(Subcommand::sweep, s, tmp.path), ValidationError);
}

TEST_CASE("tables check") {
    const auto checks = check_tables(kSource / "data" / "reference", 0.1);
    CHECK(!checks.empty());
    std::size_t performance_failures = 0, warhead_failures = 0;
    for (const auto& c : checks) {
        if (c.table == "performance" && !c.pass) ++performance_failures;
        if ((c.table == "hpv_descent" || c.table == "europrojectile_descent") && !c.pass) ++warhead_failures;
        if (c.bound) CHECK(c.computed < c.bound->max);
    }
    CHECK(performance_failures == 0);
    CHECK(warhead_failures == 0);
    const auto csv = tables_csv(checks);
    CHECK(csv.rfind("table,case,quantity,reference,computed,abs_error,rel_error,tolerance,pass\n", 0) == 0);
}

TEST_CASE("subcommand names") {
    for (auto c : {Subcommand::ascent, Subcommand::impact, Subcommand::thermal, Subcommand::sweep, Subcommand::tables}) {
        CHECK(parse_subcommand(to_string(c)) == c);
    }
    CHECK_FALSE(parse_subcommand("orbit").has_value());
}
