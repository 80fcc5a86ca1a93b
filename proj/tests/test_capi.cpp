#include <filesystem>
#include <random>
#include <string>
#include <thread>

#include "doctest.h"
#include "dlsrr/dlsrr.h"

using doctest::Approx;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = fs::path(DLSRR_SOURCE_DIR) / "data" / "scenarios";

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("dlsrr_capi_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

dlsrr_scenario* load(const char* name) {
    dlsrr_scenario* s = nullptr;
    REQUIRE(dlsrr_scenario_load((kScenarios / name).c_str(), &s) == DLSRR_OK);
    return s;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(dlsrr_version()) == "1.0.0");
    CHECK(std::string(dlsrr_status_name(DLSRR_OK)) == "ok");
    CHECK(std::string(dlsrr_status_name(DLSRR_E_PARSE)) == "parse error");
    CHECK(std::string(dlsrr_status_name(static_cast<dlsrr_status>(99))) == "unknown status");
}

TEST_CASE("atmosphere") {
    dlsrr_atmosphere a{};
    REQUIRE(dlsrr_atmosphere_sample(0.0, &a) == DLSRR_OK);
    CHECK(a.temperature == Approx(288.15));
    CHECK(a.density == Approx(1.225).epsilon(1e-3));
    CHECK(a.speed_of_sound == Approx(340.3).epsilon(1e-3));
    CHECK(dlsrr_atmosphere_sample(-5.0, &a) == DLSRR_E_DOMAIN);
    CHECK(std::string(dlsrr_last_error()).size() > 0);
    CHECK(dlsrr_atmosphere_sample(0.0, nullptr) == DLSRR_E_ARGUMENT);
}

TEST_CASE("scenario errors map to status codes") {
    dlsrr_scenario* s = nullptr;
    CHECK(dlsrr_scenario_parse("[rocket]\npreset = dlsrr30\nburn_time = x\n", nullptr, &s) == DLSRR_E_PARSE);
    CHECK(s == nullptr);
    CHECK(dlsrr_last_error_line() == 3);
    CHECK(dlsrr_scenario_parse("[launch]\naltitude = 1\n", nullptr, &s) == DLSRR_E_VALIDATION);
    CHECK(dlsrr_scenario_load("/nonexistent/dlsrr.ini", &s) == DLSRR_E_IO);
    CHECK(dlsrr_scenario_parse(nullptr, nullptr, &s) == DLSRR_E_ARGUMENT);
    dlsrr_scenario_free(nullptr);
    dlsrr_report_free(nullptr);
    dlsrr_string_free(nullptr);
}

TEST_CASE("scenario handle") {
    dlsrr_scenario* s = load("hpv_12km_optimize.ini");
    CHECK(dlsrr_scenario_needs_optimization(s) == 1);
    CHECK(dlsrr_scenario_set_dt(s, 0.05) == DLSRR_OK);
    CHECK(dlsrr_scenario_set_dt(s, -1.0) == DLSRR_E_VALIDATION);
    CHECK(dlsrr_scenario_set_qk(s, "sutton") == DLSRR_OK);
    CHECK(dlsrr_scenario_set_qk(s, "nope") == DLSRR_E_ARGUMENT);
    char* text = nullptr;
    REQUIRE(dlsrr_scenario_emit(s, &text) == DLSRR_OK);
    const std::string emitted = text;
    dlsrr_string_free(text);
    CHECK(emitted.find("dt = 0.05") != std::string::npos);
    CHECK(emitted.find("qk = sutton") != std::string::npos);

    dlsrr_scenario* again = nullptr;
    REQUIRE(dlsrr_scenario_parse(emitted.c_str(), kScenarios.c_str(), &again) == DLSRR_OK);
    char* text2 = nullptr;
    REQUIRE(dlsrr_scenario_emit(again, &text2) == DLSRR_OK);
    CHECK(emitted == text2);
    dlsrr_string_free(text2);
    dlsrr_scenario_free(again);
    dlsrr_scenario_free(s);
}

TEST_CASE("impact run through the C API") {
    TempDir tmp;
    dlsrr_scenario* s = load("europrojectile_16km.ini");
    dlsrr_report* r = nullptr;
    REQUIRE(dlsrr_run(s, "impact", tmp.path.c_str(), &r) == DLSRR_OK);
    double range = 0.0, speed = 0.0, angle = 0.0;
    CHECK(dlsrr_report_value(r, "range", &range) == DLSRR_OK);
    CHECK(dlsrr_report_value(r, "impact_speed", &speed) == DLSRR_OK);
    CHECK(dlsrr_report_value(r, "firing_angle", &angle) == DLSRR_OK);
    CHECK(range == Approx(361000.0).epsilon(0.02));
    CHECK(speed == Approx(1675.0).epsilon(0.02));
    CHECK(angle == 59.0);
    double unused = 0.0;
    CHECK(dlsrr_report_value(r, "final_cylinder_temperature", &unused) == DLSRR_E_ARGUMENT);
    CHECK(dlsrr_report_tolerance_failed(r) == 0);
    char* json = nullptr;
    REQUIRE(dlsrr_report_json(r, &json) == DLSRR_OK);
    CHECK(std::string(json).find("\"impact\"") != std::string::npos);
    dlsrr_string_free(json);
    CHECK(fs::exists(tmp.path / "descent.csv"));
    dlsrr_report_free(r);

    CHECK(dlsrr_run(s, "orbit", tmp.path.c_str(), &r) == DLSRR_E_ARGUMENT);
    dlsrr_scenario_free(s);
}

TEST_CASE("thermal run values") {
    TempDir tmp;
    dlsrr_scenario* s = load("europrojectile_16km.ini");
    dlsrr_report* r = nullptr;
    REQUIRE(dlsrr_run(s, "thermal", tmp.path.c_str(), &r) == DLSRR_OK);
    double stag = 0.0, cyl = 0.0, energy = 0.0;
    CHECK(dlsrr_report_value(r, "max_temperature:T_stag", &stag) == DLSRR_OK);
    CHECK(dlsrr_report_value(r, "final_cylinder_temperature", &cyl) == DLSRR_OK);
    CHECK(dlsrr_report_value(r, "cylinder_energy", &energy) == DLSRR_OK);
    CHECK(stag > cyl);
    CHECK(cyl > 293.15);
    CHECK(energy < 9.9e5);
    dlsrr_report_free(r);
    dlsrr_scenario_free(s);
}

TEST_CASE("last error is per thread") {
    dlsrr_scenario* s = nullptr;
    CHECK(dlsrr_scenario_parse("[rocket]\npreset = dlsrr30\nburn_time = x\n", nullptr, &s) == DLSRR_E_PARSE);
    std::string other;
    std::thread([&] {
        dlsrr_atmosphere a{};
        dlsrr_atmosphere_sample(1000.0, &a);
        other = dlsrr_last_error();
    }).join();
    CHECK(other.empty());
    CHECK(std::string(dlsrr_last_error()).find("line 3") != std::string::npos);
}
