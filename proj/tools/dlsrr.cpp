#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "dlsrr/dlsrr.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitTolerance = 3;

int report_error(const char* what) {
    std::fprintf(stderr, "dlsrr: %s: %s\n", what, dlsrr_last_error());
    return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Drone-launched rocket flight and aerothermal simulator"};
    app.set_version_flag("--version", std::string(dlsrr_version()));
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    double dt = 0.0;
    std::string qk;

    const char* names[] = {"ascent", "impact", "thermal", "sweep", "tables"};
    const char* help[] = {
        "powered ascent to apogee",
        "ascent followed by the warhead descent",
        "wall temperatures along the powered ascent",
        "cross product of release conditions and burn times",
        "reproduce the bundled reference tables and check tolerances",
    };
    for (int i = 0; i < 5; ++i) {
        auto* sub = app.add_subcommand(names[i], help[i]);
        sub->add_option("--scenario", scenario_path, "scenario file")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--dt", dt, "integration step, s")->check(CLI::PositiveNumber);
        sub->add_option("--qk", qk, "stagnation heating correlation")
            ->check(CLI::IsMember({"klein", "sutton", "chapman", "detra"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();

    dlsrr_scenario* scenario = nullptr;
    if (dlsrr_scenario_load(scenario_path.c_str(), &scenario) != DLSRR_OK) {
        return report_error(scenario_path.c_str());
    }
    if (dt > 0.0 && dlsrr_scenario_set_dt(scenario, dt) != DLSRR_OK) {
        dlsrr_scenario_free(scenario);
        return report_error("--dt");
    }
    if (!qk.empty() && dlsrr_scenario_set_qk(scenario, qk.c_str()) != DLSRR_OK) {
        dlsrr_scenario_free(scenario);
        return report_error("--qk");
    }

    dlsrr_report* report = nullptr;
    const dlsrr_status status = dlsrr_run(scenario, subcommand.c_str(), out_dir.c_str(), &report);
    dlsrr_scenario_free(scenario);
    if (status != DLSRR_OK) return report_error(subcommand.c_str());

    int code = kExitOk;
    if (dlsrr_report_tolerance_failed(report)) {
        std::fprintf(stderr, "dlsrr: tables: some values are outside their tolerance (see %s/tables.csv)\n",
                     out_dir.c_str());
        code = kExitTolerance;
    }
    dlsrr_report_free(report);
    return code;
}
