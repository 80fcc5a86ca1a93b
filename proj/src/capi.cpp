#include "dlsrr/dlsrr.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "dlsrr/atmosphere.hpp"
#include "dlsrr/error.hpp"
#include "dlsrr/scenario.hpp"

struct dlsrr_scenario {
    dlsrr::scenario::Scenario value;
};

struct dlsrr_report {
    dlsrr::scenario::RunReport value;
};

namespace {

thread_local std::string last_error;
thread_local int last_line = 0;

dlsrr_status fail(dlsrr_status status, const std::string& message, int line = 0) {
    last_error = message;
    last_line = line;
    return status;
}

template <class F>
dlsrr_status guarded(F&& body) {
    last_error.clear();
    last_line = 0;
    try {
        body();
        return DLSRR_OK;
    } catch (const dlsrr::ParseError& e) {
        return fail(DLSRR_E_PARSE, e.what(), e.line());
    } catch (const dlsrr::ValidationError& e) {
        return fail(DLSRR_E_VALIDATION, e.what());
    } catch (const dlsrr::DomainError& e) {
        return fail(DLSRR_E_DOMAIN, e.what());
    } catch (const dlsrr::IoError& e) {
        return fail(DLSRR_E_IO, e.what());
    } catch (const dlsrr::DivergenceError& e) {
        return fail(DLSRR_E_DIVERGENCE, e.what());
    } catch (const dlsrr::GroundImpactError& e) {
        return fail(DLSRR_E_GROUND_IMPACT, e.what());
    } catch (const dlsrr::OptimizationError& e) {
        return fail(DLSRR_E_OPTIMIZATION, e.what());
    } catch (const dlsrr::UnsupportedRecordError& e) {
        return fail(DLSRR_E_UNSUPPORTED, e.what());
    } catch (const std::exception& e) {
        return fail(DLSRR_E_INTERNAL, e.what());
    } catch (...) {
        return fail(DLSRR_E_INTERNAL, "unknown error");
    }
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* dlsrr_version(void) { return dlsrr::scenario::version(); }

const char* dlsrr_last_error(void) { return last_error.c_str(); }

int dlsrr_last_error_line(void) { return last_line; }

const char* dlsrr_status_name(dlsrr_status status) {
    switch (status) {
        case DLSRR_OK: return "ok";
        case DLSRR_E_ARGUMENT: return "invalid argument";
        case DLSRR_E_PARSE: return "parse error";
        case DLSRR_E_VALIDATION: return "validation error";
        case DLSRR_E_DOMAIN: return "domain error";
        case DLSRR_E_IO: return "i/o error";
        case DLSRR_E_DIVERGENCE: return "divergence";
        case DLSRR_E_GROUND_IMPACT: return "ground impact";
        case DLSRR_E_OPTIMIZATION: return "optimization failed";
        case DLSRR_E_UNSUPPORTED: return "unsupported record";
        case DLSRR_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

dlsrr_status dlsrr_atmosphere_sample(double altitude, dlsrr_atmosphere* out) {
    if (!out) return fail(DLSRR_E_ARGUMENT, "out is null");
    return guarded([&] {
        const auto a = dlsrr::atmosphere::sample(altitude);
        *out = {a.altitude, a.temperature, a.pressure, a.density, a.speed_of_sound};
    });
}

dlsrr_status dlsrr_scenario_load(const char* path, dlsrr_scenario** out) {
    if (!path || !out) return fail(DLSRR_E_ARGUMENT, "path and out must not be null");
    *out = nullptr;
    return guarded([&] { *out = new dlsrr_scenario{dlsrr::scenario::load_scenario(path)}; });
}

dlsrr_status dlsrr_scenario_parse(const char* text, const char* base_dir, dlsrr_scenario** out) {
    if (!text || !out) return fail(DLSRR_E_ARGUMENT, "text and out must not be null");
    *out = nullptr;
    return guarded([&] {
        *out = new dlsrr_scenario{
            dlsrr::scenario::parse_scenario(text, base_dir ? base_dir : "")};
    });
}

void dlsrr_scenario_free(dlsrr_scenario* scenario) { delete scenario; }

dlsrr_status dlsrr_scenario_set_dt(dlsrr_scenario* scenario, double dt) {
    if (!scenario) return fail(DLSRR_E_ARGUMENT, "scenario is null");
    if (!(dt > 0.0)) return fail(DLSRR_E_VALIDATION, "run: dt must be positive");
    scenario->value.dt = dt;
    return DLSRR_OK;
}

dlsrr_status dlsrr_scenario_set_qk(dlsrr_scenario* scenario, const char* model) {
    if (!scenario || !model) return fail(DLSRR_E_ARGUMENT, "scenario and model must not be null");
    const auto qk = dlsrr::thermal::parse_qk_model(model);
    if (!qk) return fail(DLSRR_E_ARGUMENT, std::string("unknown qk model '") + model + "'");
    scenario->value.qk = *qk;
    return DLSRR_OK;
}

int dlsrr_scenario_needs_optimization(const dlsrr_scenario* scenario) {
    return scenario && scenario->value.needs_optimization() ? 1 : 0;
}

dlsrr_status dlsrr_scenario_emit(const dlsrr_scenario* scenario, char** out) {
    if (!scenario || !out) return fail(DLSRR_E_ARGUMENT, "scenario and out must not be null");
    return guarded([&] { *out = duplicate(dlsrr::scenario::emit(scenario->value)); });
}

dlsrr_status dlsrr_run(const dlsrr_scenario* scenario, const char* subcommand, const char* out_dir,
                       dlsrr_report** out) {
    if (!scenario || !subcommand || !out_dir || !out) {
        return fail(DLSRR_E_ARGUMENT, "arguments must not be null");
    }
    *out = nullptr;
    const auto cmd = dlsrr::scenario::parse_subcommand(subcommand);
    if (!cmd) return fail(DLSRR_E_ARGUMENT, std::string("unknown subcommand '") + subcommand + "'");
    return guarded([&] {
        *out = new dlsrr_report{dlsrr::scenario::run(*cmd, scenario->value, out_dir)};
    });
}

void dlsrr_report_free(dlsrr_report* report) { delete report; }

int dlsrr_report_tolerance_failed(const dlsrr_report* report) {
    return report && report->value.tolerance_failure() ? 1 : 0;
}

dlsrr_status dlsrr_report_json(const dlsrr_report* report, char** out) {
    if (!report || !out) return fail(DLSRR_E_ARGUMENT, "report and out must not be null");
    return guarded([&] { *out = duplicate(report->value.to_json()); });
}

dlsrr_status dlsrr_report_value(const dlsrr_report* report, const char* key, double* out) {
    if (!report || !key || !out) return fail(DLSRR_E_ARGUMENT, "arguments must not be null");
    const auto& r = report->value;
    const std::string k = key;
    if (r.ascent) {
        const auto& a = *r.ascent;
        if (k == "firing_angle") return *out = a.firing_angle, DLSRR_OK;
        if (k == "apogee_altitude") return *out = a.apogee_altitude, DLSRR_OK;
        if (k == "apogee_speed") return *out = a.apogee_speed, DLSRR_OK;
        if (k == "apogee_downrange") return *out = a.apogee_downrange, DLSRR_OK;
        if (k == "time_to_apogee") return *out = a.time_to_apogee, DLSRR_OK;
        if (k == "velocity_gain") return *out = a.velocity_gain, DLSRR_OK;
        if (k == "drag_loss") return *out = a.drag_loss, DLSRR_OK;
        if (k == "gravity_loss") return *out = a.gravity_loss, DLSRR_OK;
    }
    if (r.impact) {
        const auto& i = *r.impact;
        if (k == "range") return *out = i.range, DLSRR_OK;
        if (k == "impact_speed") return *out = i.impact_speed, DLSRR_OK;
        if (k == "descent_time") return *out = i.descent_time, DLSRR_OK;
        if (k == "flight_time") return *out = i.flight_time, DLSRR_OK;
        if (k == "descent_drag_loss") return *out = i.descent_drag_loss, DLSRR_OK;
        if (k == "descent_velocity_loss") return *out = i.descent_velocity_loss, DLSRR_OK;
    }
    if (r.thermal) {
        if (k == "final_cylinder_temperature") return *out = r.thermal->final_cylinder_temperature, DLSRR_OK;
        if (k == "cylinder_energy") return *out = r.thermal->cylinder_energy, DLSRR_OK;
        const std::string prefix = "max_temperature:";
        if (k.rfind(prefix, 0) == 0) {
            for (const auto& st : r.thermal->stations) {
                if (st.label == k.substr(prefix.size())) return *out = st.max_temperature, DLSRR_OK;
            }
        }
    }
    return fail(DLSRR_E_ARGUMENT, "report has no value '" + k + "'");
}

void dlsrr_string_free(char* s) { std::free(s); }

}  // extern "C"
