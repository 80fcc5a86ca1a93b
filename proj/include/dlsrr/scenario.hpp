#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlsrr/flight.hpp"
#include "dlsrr/thermal.hpp"
#include "dlsrr/vehicle.hpp"

namespace dlsrr::scenario {

/// Cross product of release conditions and burn times run by `sweep`.
struct SweepGrid {
    std::vector<double> altitudes;    // m
    std::vector<double> speeds;       // m/s
    std::vector<double> burn_times;   // s

    bool operator==(const SweepGrid&) const = default;
};

struct Scenario {
    vehicle::RocketSpec rocket = vehicle::dlsrr30(30.0);
    std::string rocket_drag = "rocket30";   // bundled table name or file path
    vehicle::ProjectileSpec projectile = vehicle::europrojectile();
    std::string projectile_drag = "europrojectile";
    double release_altitude = 0.0;  // m
    double release_speed = 0.0;     // m/s
    std::optional<double> firing_angle;   // degrees; empty means optimize
    double dt = flight::kDefaultStep;
    std::vector<double> angle_grid = flight::angle_grid(30.0, 80.0, 1.0);
    bool drag_enabled = true;
    bool thrust_enabled = true;
    thermal::QkModel qk = thermal::QkModel::klein;
    std::vector<thermal::ThermalStation> stations = thermal::default_stations();
    std::optional<SweepGrid> sweep;
    std::string reference_dir;      // empty means <data dir>/reference
    std::filesystem::path base_dir; // relative paths resolve against this

    bool needs_optimization() const { return !firing_angle.has_value(); }
    flight::LaunchCondition launch(double angle) const {
        return {release_altitude, release_speed, angle};
    }
    thermal::ThermalConstants thermal_constants() const;
    flight::FlightOptions flight_options() const;

    /// Throws ValidationError naming the violated invariant.
    void validate() const;

    bool operator==(const Scenario&) const = default;
};

/// Parse the scenario format (see README). `base_dir` resolves relative drag paths.
/// Throws ParseError (with line) for malformed or unknown entries and
/// ValidationError for missing fields and invariant violations.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(emit(s), s.base_dir) == s.
std::string emit(const Scenario& s);

/// DLSRR_DATA_DIR if set, else the install-time data directory.
std::filesystem::path data_dir();

/// Reference data with per-column tolerances (see data/reference/README).
struct Tolerance {
    enum class Kind { absolute, relative };
    Kind kind = Kind::absolute;
    double value = 0.0;

    bool accepts(double reference, double computed) const;
};

struct Bound {
    double max = 0.0;
};

struct ReferenceTable {
    std::string name;
    std::vector<std::string> columns;
    std::map<std::string, Tolerance> tolerances;
    std::map<std::string, Bound> bounds;
    std::vector<std::string> inputs;
    std::map<std::string, std::string> attributes;   // other '@key value' directives
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;   // throws ValidationError if absent
    double at(std::size_t row, std::string_view name) const;
};

ReferenceTable parse_reference(std::string_view text, const std::string& source = {});
ReferenceTable load_reference(const std::filesystem::path& path);

enum class Subcommand { ascent, impact, thermal, sweep, tables };

std::optional<Subcommand> parse_subcommand(std::string_view name);
const char* to_string(Subcommand cmd);

struct AscentSummary {
    double firing_angle = 0.0;
    double apogee_altitude = 0.0;
    double apogee_speed = 0.0;
    double apogee_downrange = 0.0;
    double time_to_apogee = 0.0;
    double velocity_gain = 0.0;
    double drag_loss = 0.0;
    double gravity_loss = 0.0;
};

struct ImpactSummary {
    double range = 0.0;
    double impact_speed = 0.0;
    double descent_time = 0.0;
    double flight_time = 0.0;
    double descent_drag_loss = 0.0;
    double descent_velocity_loss = 0.0;
};

struct StationSummary {
    std::string label;
    double max_temperature = 0.0;   // K
    double peak_time = 0.0;         // s
};

struct ThermalSummary {
    std::vector<StationSummary> stations;
    double final_cylinder_temperature = 0.0;   // K
    double cylinder_energy = 0.0;              // J/m^2
};

struct TableCheck {
    std::string table;
    std::string case_label;
    std::string quantity;
    double reference = 0.0;
    double computed = 0.0;
    std::optional<Tolerance> tolerance;
    std::optional<Bound> bound;
    bool pass = true;
};

struct SweepCell {
    double altitude = 0.0;
    double speed = 0.0;
    double burn_time = 0.0;
    bool ok = false;
    double firing_angle = 0.0;
    double range = 0.0;
    double apogee_altitude = 0.0;
    double impact_speed = 0.0;
    std::string error;
};

struct RunReport {
    Subcommand subcommand = Subcommand::ascent;
    std::string version;
    std::string input;   // emitted scenario
    bool optimized = false;
    std::optional<AscentSummary> ascent;
    std::optional<ImpactSummary> impact;
    std::optional<ThermalSummary> thermal;
    std::vector<SweepCell> sweep;
    std::vector<TableCheck> checks;
    std::vector<std::string> files;

    bool tolerance_failure() const;
    std::string to_json() const;
};

const char* version();

/// Runs a subcommand and writes its CSV files and report.json into out_dir (created if needed).
RunReport run(Subcommand cmd, const Scenario& s, const std::filesystem::path& out_dir);

/// Table-reproduction checks without writing files.
std::vector<TableCheck> check_tables(const std::filesystem::path& reference_dir, double dt);

std::string tables_csv(const std::vector<TableCheck>& checks);
std::string sweep_csv(const std::vector<SweepCell>& cells);
std::string angles_csv(const flight::AngleOptimization& opt);

}  // namespace dlsrr::scenario
