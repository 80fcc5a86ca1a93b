#include "dlsrr/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "json.hpp"

#include "dlsrr/error.hpp"
#include "text.hpp"

#ifndef DLSRR_DEFAULT_DATA_DIR
#define DLSRR_DEFAULT_DATA_DIR "data"
#endif

#ifndef DLSRR_VERSION
#define DLSRR_VERSION "0.0.0"
#endif

namespace dlsrr::scenario {

namespace fs = std::filesystem;

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& grammar() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"rocket", {"preset", "mass", "diameter", "propellant_fraction", "exhaust_velocity",
                    "burn_time", "drag", "nose_radius", "nose_length", "body_length"}},
        {"projectile", {"preset", "mass", "diameter", "drag"}},
        {"launch", {"altitude", "speed", "angle"}},
        {"run", {"dt", "angle_grid", "qk", "reference_dir", "drag", "thrust"}},
        {"thermal", {"stations", "stagnation_emissivity", "cone_emissivity", "cylinder_length"}},
        {"sweep", {"altitudes", "speeds", "burn_times"}},
    };
    return keys;
}

std::string_view strip_comment(std::string_view line) {
    const auto pos = line.find_first_of("#;");
    return text::trim(pos == std::string_view::npos ? line : line.substr(0, pos));
}

std::map<std::string, Section> tokenize(std::string_view doc) {
    std::map<std::string, Section> sections;
    Section* current = nullptr;
    std::string section_name;
    int line_no = 0;
    for (auto raw : text::lines(doc)) {
        ++line_no;
        const auto line = strip_comment(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            const std::string name(text::trim(line.substr(1, line.size() - 2)));
            if (!grammar().contains(name)) throw ParseError("unknown section [" + name + "]", line_no);
            if (sections.contains(name)) throw ParseError("duplicate section [" + name + "]", line_no);
            current = &sections[name];
            section_name = name;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
        if (!current) throw ParseError("entry outside of a section", line_no);
        const std::string key(text::trim(line.substr(0, eq)));
        const std::string value(text::trim(line.substr(eq + 1)));
        if (!grammar().at(section_name).contains(key)) {
            throw ParseError("unknown key '" + key + "' in [" + section_name + "]", line_no);
        }
        if (value.empty()) throw ParseError("empty value for '" + key + "'", line_no);
        if (current->contains(key)) throw ParseError("duplicate key '" + key + "'", line_no);
        (*current)[key] = {value, line_no};
    }
    return sections;
}

double number(const Entry& e, const std::string& key) {
    const auto v = text::to_double(e.value);
    if (!v) throw ParseError("expected a number for '" + key + "'", e.line);
    return *v;
}

std::vector<double> number_list(const Entry& e, const std::string& key) {
    std::vector<double> out;
    for (auto item : text::split(e.value, ',')) {
        const auto v = text::to_double(item);
        if (!v) throw ParseError("expected a comma-separated number list for '" + key + "'", e.line);
        out.push_back(*v);
    }
    return out;
}

bool on_off(const Entry& e, const std::string& key) {
    if (e.value == "on") return true;
    if (e.value == "off") return false;
    throw ParseError("'" + key + "' must be on or off", e.line);
}

std::vector<double> angle_list(const Entry& e) {
    if (e.value.find(':') != std::string::npos) {
        const auto parts = text::split(e.value, ':');
        if (parts.size() != 3) throw ParseError("angle_grid range must be first:last:step", e.line);
        double v[3];
        for (int i = 0; i < 3; ++i) {
            const auto d = text::to_double(parts[i]);
            if (!d) throw ParseError("angle_grid range must be numeric", e.line);
            v[i] = *d;
        }
        try {
            return flight::angle_grid(v[0], v[1], v[2]);
        } catch (const DomainError& err) {
            throw ParseError(err.what(), e.line);
        }
    }
    return number_list(e, "angle_grid");
}

const Entry* find(const Section* sec, const std::string& key) {
    if (!sec) return nullptr;
    const auto it = sec->find(key);
    return it == sec->end() ? nullptr : &it->second;
}

const Entry& require(const Section* sec, const std::string& section, const std::string& key) {
    const Entry* e = find(sec, key);
    if (!e) throw ValidationError("missing required field [" + section + "] " + key);
    return *e;
}

vehicle::DragTable resolve_drag(const Entry& e, const fs::path& base_dir) {
    if (auto table = vehicle::builtin_drag_table(e.value)) return *table;
    fs::path path(e.value);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    if (!fs::exists(path)) {
        throw ParseError("drag '" + e.value + "' is neither a bundled table nor a readable file", e.line);
    }
    return vehicle::load_drag_table(path.string());
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_number(values[i]);
    }
    return out;
}

std::string csv_number(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void parse_rocket(Scenario& s, const Section* sec, const fs::path& base_dir) {
    if (!sec) throw ValidationError("missing required section [rocket]");
    std::optional<vehicle::RocketSpec> rocket;
    if (const Entry* preset = find(sec, "preset")) {
        if (preset->value != "dlsrr30") throw ParseError("unknown rocket preset '" + preset->value + "'", preset->line);
        rocket = vehicle::dlsrr30(number(require(sec, "rocket", "burn_time"), "burn_time"));
        s.rocket_drag = "rocket30";
    } else {
        const Entry& drag = require(sec, "rocket", "drag");
        rocket = vehicle::RocketSpec{number(require(sec, "rocket", "mass"), "mass"),
                                     number(require(sec, "rocket", "diameter"), "diameter"),
                                     number(require(sec, "rocket", "propellant_fraction"), "propellant_fraction"),
                                     number(require(sec, "rocket", "exhaust_velocity"), "exhaust_velocity"),
                                     number(require(sec, "rocket", "burn_time"), "burn_time"),
                                     resolve_drag(drag, base_dir)};
        s.rocket_drag = drag.value;
    }
    if (const Entry* e = find(sec, "mass")) rocket->total_mass = number(*e, "mass");
    if (const Entry* e = find(sec, "diameter")) rocket->diameter = number(*e, "diameter");
    if (const Entry* e = find(sec, "propellant_fraction")) rocket->propellant_fraction = number(*e, "propellant_fraction");
    if (const Entry* e = find(sec, "exhaust_velocity")) rocket->exhaust_velocity = number(*e, "exhaust_velocity");
    if (const Entry* e = find(sec, "drag")) {
        rocket->drag = resolve_drag(*e, base_dir);
        s.rocket_drag = e->value;
    }
    if (const Entry* e = find(sec, "nose_radius")) rocket->nose_radius = number(*e, "nose_radius");
    if (const Entry* e = find(sec, "nose_length")) rocket->nose_length = number(*e, "nose_length");
    if (const Entry* e = find(sec, "body_length")) rocket->body_length = number(*e, "body_length");
    s.rocket = *rocket;
}

void parse_projectile(Scenario& s, const Section* sec, const fs::path& base_dir) {
    if (!sec) throw ValidationError("missing required section [projectile]");
    std::optional<vehicle::ProjectileSpec> projectile;
    if (const Entry* preset = find(sec, "preset")) {
        if (preset->value == "europrojectile") {
            projectile = vehicle::europrojectile();
            s.projectile_drag = "europrojectile";
        } else if (preset->value == "hpv") {
            projectile = vehicle::hpv();
            s.projectile_drag = "hpv";
        } else {
            throw ParseError("unknown projectile preset '" + preset->value + "'", preset->line);
        }
    } else {
        const Entry& drag = require(sec, "projectile", "drag");
        projectile = vehicle::ProjectileSpec{number(require(sec, "projectile", "mass"), "mass"),
                                             number(require(sec, "projectile", "diameter"), "diameter"),
                                             resolve_drag(drag, base_dir)};
        s.projectile_drag = drag.value;
    }
    if (const Entry* e = find(sec, "mass")) projectile->mass = number(*e, "mass");
    if (const Entry* e = find(sec, "diameter")) projectile->diameter = number(*e, "diameter");
    if (const Entry* e = find(sec, "drag")) {
        projectile->drag = resolve_drag(*e, base_dir);
        s.projectile_drag = e->value;
    }
    s.projectile = *projectile;
}

void parse_thermal(Scenario& s, const Section* sec) {
    double stagnation_e = 0.6;
    double cone_e = 0.75;
    double cylinder_length = 1.0;
    if (const Entry* e = find(sec, "stagnation_emissivity")) stagnation_e = number(*e, "stagnation_emissivity");
    if (const Entry* e = find(sec, "cone_emissivity")) cone_e = number(*e, "cone_emissivity");
    if (const Entry* e = find(sec, "cylinder_length")) cylinder_length = number(*e, "cylinder_length");

    std::vector<std::string> names = {"stagnation", "cone:0.03", "cone:0.10", "cone:0.30", "cylinder"};
    int line = 0;
    if (const Entry* e = find(sec, "stations")) {
        names.clear();
        for (auto item : text::split(e->value, ',')) names.emplace_back(item);
        line = e->line;
    }
    s.stations.clear();
    for (const auto& name : names) {
        if (name == "stagnation") {
            s.stations.push_back(thermal::stagnation_station(stagnation_e, s.rocket.nose_radius));
        } else if (name == "cylinder") {
            s.stations.push_back(thermal::cylinder_station(cylinder_length));
        } else if (name.rfind("cone:", 0) == 0) {
            const auto y = text::to_double(std::string_view(name).substr(5));
            if (!y) throw ParseError("cone station needs a numeric Y, e.g. cone:0.10", line);
            s.stations.push_back(thermal::cone_station(*y, cone_e));
        } else {
            throw ParseError("unknown thermal station '" + name + "'", line);
        }
    }
}

std::string station_name(const thermal::ThermalStation& st) {
    switch (st.kind) {
        case thermal::StationKind::stagnation: return "stagnation";
        case thermal::StationKind::cylinder_base: return "cylinder";
        case thermal::StationKind::cone: return "cone:" + format_number(st.y);
    }
    return "stagnation";
}

}  // namespace

thermal::ThermalConstants Scenario::thermal_constants() const {
    thermal::ThermalConstants c;
    c.qk_model = qk;
    return c;
}

flight::FlightOptions Scenario::flight_options() const {
    flight::FlightOptions o;
    o.drag_enabled = drag_enabled;
    o.thrust_enabled = thrust_enabled;
    return o;
}

void Scenario::validate() const {
    rocket.validate();
    projectile.validate();
    launch(45.0).validate();
    if (firing_angle && !(*firing_angle > 0.0 && *firing_angle < 90.0)) {
        throw ValidationError("launch: firing angle must lie in (0, 90) degrees");
    }
    if (!(dt > 0.0)) throw ValidationError("run: dt must be positive");
    if (angle_grid.empty()) throw ValidationError("run: angle_grid must not be empty");
    for (std::size_t i = 0; i < angle_grid.size(); ++i) {
        if (!(angle_grid[i] > 0.0 && angle_grid[i] < 90.0)) {
            throw ValidationError("run: angle_grid entries must lie in (0, 90) degrees");
        }
        if (i > 0 && !(angle_grid[i] > angle_grid[i - 1])) {
            throw ValidationError("run: angle_grid must be strictly increasing");
        }
    }
    for (const auto& st : stations) st.validate(rocket.nose_length);
    if (sweep) {
        if (sweep->altitudes.empty() || sweep->speeds.empty() || sweep->burn_times.empty()) {
            throw ValidationError("sweep: altitudes, speeds and burn_times must be non-empty");
        }
        for (double h : sweep->altitudes) {
            if (!(h >= 0.0 && h <= 30'000.0)) throw ValidationError("sweep: altitudes must lie in [0, 30000] m");
        }
        for (double v : sweep->speeds) {
            if (!(v >= 0.0)) throw ValidationError("sweep: speeds must be >= 0");
        }
        for (double t : sweep->burn_times) {
            if (!(t > 0.0)) throw ValidationError("sweep: burn_times must be positive");
        }
    }
}

Scenario parse_scenario(std::string_view doc, const fs::path& base_dir) {
    const auto sections = tokenize(doc);
    auto section = [&](const std::string& name) -> const Section* {
        const auto it = sections.find(name);
        return it == sections.end() ? nullptr : &it->second;
    };

    Scenario s;
    s.base_dir = base_dir;
    parse_rocket(s, section("rocket"), base_dir);
    parse_projectile(s, section("projectile"), base_dir);

    const Section* launch = section("launch");
    if (!launch) throw ValidationError("missing required section [launch]");
    s.release_altitude = number(require(launch, "launch", "altitude"), "altitude");
    s.release_speed = number(require(launch, "launch", "speed"), "speed");
    if (const Entry* e = find(launch, "angle")) s.firing_angle = number(*e, "angle");

    const Section* run = section("run");
    s.angle_grid = flight::angle_grid(30.0, 80.0, 1.0);
    if (const Entry* e = find(run, "dt")) s.dt = number(*e, "dt");
    if (const Entry* e = find(run, "angle_grid")) s.angle_grid = angle_list(*e);
    if (const Entry* e = find(run, "qk")) {
        const auto model = thermal::parse_qk_model(e->value);
        if (!model) throw ParseError("qk must be one of klein, sutton, chapman, detra", e->line);
        s.qk = *model;
    }
    if (const Entry* e = find(run, "reference_dir")) s.reference_dir = e->value;
    if (const Entry* e = find(run, "drag")) s.drag_enabled = on_off(*e, "drag");
    if (const Entry* e = find(run, "thrust")) s.thrust_enabled = on_off(*e, "thrust");

    parse_thermal(s, section("thermal"));

    if (const Section* sw = section("sweep")) {
        SweepGrid grid;
        grid.altitudes = number_list(require(sw, "sweep", "altitudes"), "altitudes");
        grid.speeds = number_list(require(sw, "sweep", "speeds"), "speeds");
        grid.burn_times = number_list(require(sw, "sweep", "burn_times"), "burn_times");
        s.sweep = std::move(grid);
    }

    s.validate();
    return s;
}

Scenario load_scenario(const fs::path& path) {
    return parse_scenario(text::read_file(path.string()), path.parent_path());
}

std::string emit(const Scenario& s) {
    std::string out;
    auto kv = [&out](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    out += "[rocket]\n";
    kv("mass", format_number(s.rocket.total_mass));
    kv("diameter", format_number(s.rocket.diameter));
    kv("propellant_fraction", format_number(s.rocket.propellant_fraction));
    kv("exhaust_velocity", format_number(s.rocket.exhaust_velocity));
    kv("burn_time", format_number(s.rocket.burn_time));
    kv("drag", s.rocket_drag);
    kv("nose_radius", format_number(s.rocket.nose_radius));
    kv("nose_length", format_number(s.rocket.nose_length));
    kv("body_length", format_number(s.rocket.body_length));

    out += "\n[projectile]\n";
    kv("mass", format_number(s.projectile.mass));
    kv("diameter", format_number(s.projectile.diameter));
    kv("drag", s.projectile_drag);

    out += "\n[launch]\n";
    kv("altitude", format_number(s.release_altitude));
    kv("speed", format_number(s.release_speed));
    if (s.firing_angle) kv("angle", format_number(*s.firing_angle));

    out += "\n[run]\n";
    kv("dt", format_number(s.dt));
    kv("angle_grid", format_list(s.angle_grid));
    kv("qk", thermal::to_string(s.qk));
    if (!s.reference_dir.empty()) kv("reference_dir", s.reference_dir);
    kv("drag", s.drag_enabled ? "on" : "off");
    kv("thrust", s.thrust_enabled ? "on" : "off");

    out += "\n[thermal]\n";
    std::string names;
    double stagnation_e = 0.6;
    double cone_e = 0.75;
    double cylinder_length = 1.0;
    for (const auto& st : s.stations) {
        if (!names.empty()) names += ", ";
        names += station_name(st);
        if (st.kind == thermal::StationKind::stagnation) stagnation_e = st.emissivity;
        if (st.kind == thermal::StationKind::cone) cone_e = st.emissivity;
        if (st.kind == thermal::StationKind::cylinder_base) cylinder_length = st.length;
    }
    kv("stations", names);
    kv("stagnation_emissivity", format_number(stagnation_e));
    kv("cone_emissivity", format_number(cone_e));
    kv("cylinder_length", format_number(cylinder_length));

    if (s.sweep) {
        out += "\n[sweep]\n";
        kv("altitudes", format_list(s.sweep->altitudes));
        kv("speeds", format_list(s.sweep->speeds));
        kv("burn_times", format_list(s.sweep->burn_times));
    }
    return out;
}

fs::path data_dir() {
    if (const char* env = std::getenv("DLSRR_DATA_DIR"); env && *env) return fs::path(env);
    return fs::path(DLSRR_DEFAULT_DATA_DIR);
}

// ---------------------------------------------------------------------------
// Reference tables

bool Tolerance::accepts(double reference, double computed) const {
    if (!std::isfinite(computed)) return false;
    const double err = std::abs(computed - reference);
    return kind == Kind::absolute ? err <= value : err <= value * std::abs(reference);
}

std::size_t ReferenceTable::column(std::string_view col) const {
    const auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) {
        throw ValidationError("reference table '" + name + "' has no column '" + std::string(col) + "'");
    }
    return static_cast<std::size_t>(it - columns.begin());
}

double ReferenceTable::at(std::size_t row, std::string_view col) const {
    return rows.at(row).at(column(col));
}

ReferenceTable parse_reference(std::string_view doc, const std::string& source) {
    ReferenceTable table;
    table.name = source;
    int line_no = 0;
    for (auto raw : text::lines(doc)) {
        ++line_no;
        const auto line = text::strip_comment(raw);
        if (line.empty()) continue;
        auto fields = text::split_whitespace(line);
        if (line.front() == '@') {
            const std::string directive(fields[0].substr(1));
            if (directive == "table") {
                if (fields.size() != 2) throw ParseError(source + ": @table needs a name", line_no);
                table.name = std::string(fields[1]);
            } else if (directive == "columns") {
                for (std::size_t i = 1; i < fields.size(); ++i) table.columns.emplace_back(fields[i]);
            } else if (directive == "inputs") {
                for (std::size_t i = 1; i < fields.size(); ++i) table.inputs.emplace_back(fields[i]);
            } else if (directive == "tolerance") {
                if (fields.size() != 4) throw ParseError(source + ": @tolerance <column> abs|rel <value>", line_no);
                Tolerance tol;
                if (fields[2] == "abs") tol.kind = Tolerance::Kind::absolute;
                else if (fields[2] == "rel") tol.kind = Tolerance::Kind::relative;
                else throw ParseError(source + ": tolerance kind must be abs or rel", line_no);
                const auto v = text::to_double(fields[3]);
                if (!v || *v < 0.0) throw ParseError(source + ": tolerance must be a non-negative number", line_no);
                tol.value = *v;
                table.tolerances[std::string(fields[1])] = tol;
            } else if (directive == "bound") {
                if (fields.size() != 4 || fields[2] != "max") throw ParseError(source + ": @bound <quantity> max <value>", line_no);
                const auto v = text::to_double(fields[3]);
                if (!v) throw ParseError(source + ": bound must be numeric", line_no);
                table.bounds[std::string(fields[1])] = Bound{*v};
            } else {
                std::string value;
                for (std::size_t i = 1; i < fields.size(); ++i) {
                    if (i > 1) value += ' ';
                    value += fields[i];
                }
                table.attributes[directive] = value;
            }
            continue;
        }
        if (table.columns.empty()) throw ParseError(source + ": data row before @columns", line_no);
        if (fields.size() != table.columns.size()) {
            throw ParseError(source + ": expected " + std::to_string(table.columns.size()) + " values", line_no);
        }
        std::vector<double> row;
        for (auto f : fields) {
            const auto v = text::to_double(f);
            if (!v) throw ParseError(source + ": non-numeric value '" + std::string(f) + "'", line_no);
            row.push_back(*v);
        }
        table.rows.push_back(std::move(row));
    }
    for (const auto& [col, tol] : table.tolerances) table.column(col);
    for (const auto& col : table.inputs) table.column(col);
    return table;
}

ReferenceTable load_reference(const fs::path& path) {
    return parse_reference(text::read_file(path.string()), path.filename().string());
}

// ---------------------------------------------------------------------------
// Runs

std::optional<Subcommand> parse_subcommand(std::string_view name) {
    if (name == "ascent") return Subcommand::ascent;
    if (name == "impact") return Subcommand::impact;
    if (name == "thermal") return Subcommand::thermal;
    if (name == "sweep") return Subcommand::sweep;
    if (name == "tables") return Subcommand::tables;
    return std::nullopt;
}

const char* to_string(Subcommand cmd) {
    switch (cmd) {
        case Subcommand::ascent: return "ascent";
        case Subcommand::impact: return "impact";
        case Subcommand::thermal: return "thermal";
        case Subcommand::sweep: return "sweep";
        case Subcommand::tables: return "tables";
    }
    return "ascent";
}

const char* version() { return DLSRR_VERSION; }

bool RunReport::tolerance_failure() const {
    return std::any_of(checks.begin(), checks.end(), [](const TableCheck& c) { return !c.pass; });
}

namespace {

nlohmann::json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

std::string tolerance_text(const TableCheck& c) {
    if (c.tolerance) {
        return std::string(c.tolerance->kind == Tolerance::Kind::absolute ? "abs " : "rel ") +
               format_number(c.tolerance->value);
    }
    if (c.bound) return "max " + format_number(c.bound->max);
    return "-";
}

}  // namespace

std::string RunReport::to_json() const {
    nlohmann::json j;
    j["subcommand"] = to_string(subcommand);
    j["version"] = version;
    j["input"] = input;
    j["optimized_angle"] = optimized;
    if (ascent) {
        j["ascent"] = {{"firing_angle_deg", num(ascent->firing_angle)},
                       {"apogee_altitude_m", num(ascent->apogee_altitude)},
                       {"apogee_speed_mps", num(ascent->apogee_speed)},
                       {"apogee_downrange_m", num(ascent->apogee_downrange)},
                       {"time_to_apogee_s", num(ascent->time_to_apogee)},
                       {"velocity_gain_mps", num(ascent->velocity_gain)},
                       {"drag_loss_mps", num(ascent->drag_loss)},
                       {"gravity_loss_mps", num(ascent->gravity_loss)}};
    }
    if (impact) {
        j["impact"] = {{"range_m", num(impact->range)},
                       {"impact_speed_mps", num(impact->impact_speed)},
                       {"descent_time_s", num(impact->descent_time)},
                       {"flight_time_s", num(impact->flight_time)},
                       {"descent_drag_loss_mps", num(impact->descent_drag_loss)},
                       {"descent_velocity_loss_mps", num(impact->descent_velocity_loss)}};
    }
    if (thermal) {
        nlohmann::json stations = nlohmann::json::array();
        for (const auto& st : thermal->stations) {
            stations.push_back({{"station", st.label},
                                {"max_temperature_K", num(st.max_temperature)},
                                {"peak_time_s", num(st.peak_time)}});
        }
        j["thermal"] = {{"stations", stations},
                        {"final_cylinder_temperature_K", num(thermal->final_cylinder_temperature)},
                        {"cylinder_energy_Jpm2", num(thermal->cylinder_energy)}};
    }
    if (subcommand == Subcommand::sweep) {
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& c : sweep) {
            nlohmann::json cell = {{"altitude_m", c.altitude}, {"speed_mps", c.speed},
                                   {"burn_time_s", c.burn_time}, {"ok", c.ok}};
            if (c.ok) {
                cell["firing_angle_deg"] = num(c.firing_angle);
                cell["range_m"] = num(c.range);
                cell["apogee_altitude_m"] = num(c.apogee_altitude);
                cell["impact_speed_mps"] = num(c.impact_speed);
            } else {
                cell["error"] = c.error;
            }
            cells.push_back(cell);
        }
        j["sweep"] = cells;
    }
    if (subcommand == Subcommand::tables) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& c : checks) {
            rows.push_back({{"table", c.table}, {"case", c.case_label}, {"quantity", c.quantity},
                            {"reference", num(c.reference)}, {"computed", num(c.computed)},
                            {"tolerance", tolerance_text(c)}, {"pass", c.pass}});
        }
        j["checks"] = rows;
        j["tolerance_failure"] = tolerance_failure();
    }
    j["files"] = files;
    return j.dump(2) + "\n";
}

std::string tables_csv(const std::vector<TableCheck>& checks) {
    std::string out = "table,case,quantity,reference,computed,abs_error,rel_error,tolerance,pass\n";
    for (const auto& c : checks) {
        std::string errors = ",";
        if (!c.bound) {
            const double abs_err = c.computed - c.reference;
            const double rel_err = c.reference != 0.0 ? abs_err / std::abs(c.reference) : NAN;
            errors = csv_number(abs_err) + "," + csv_number(rel_err);
        }
        out += c.table + "," + c.case_label + "," + c.quantity + "," + csv_number(c.reference) + "," +
               csv_number(c.computed) + "," + errors + "," + tolerance_text(c) + "," +
               (c.pass ? "pass" : "FAIL") + "\n";
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::string out = "h0,v0,t_b,status,angle,range,apogee,impact_speed,error\n";
    for (const auto& c : cells) {
        out += csv_number(c.altitude) + "," + csv_number(c.speed) + "," + csv_number(c.burn_time) + ",";
        if (c.ok) {
            out += "ok," + csv_number(c.firing_angle) + "," + csv_number(c.range) + "," +
                   csv_number(c.apogee_altitude) + "," + csv_number(c.impact_speed) + ",\n";
        } else {
            std::string msg = c.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            out += "error,,,,," + msg + "\n";
        }
    }
    return out;
}

std::string angles_csv(const flight::AngleOptimization& opt) {
    std::string out = "angle,status,range,apogee,apogee_speed,impact_speed\n";
    for (const auto& t : opt.trials) {
        out += csv_number(t.angle) + ",";
        if (t.ok) {
            out += "ok," + csv_number(t.range) + "," + csv_number(t.apogee_altitude) + "," +
                   csv_number(t.apogee_speed) + "," + csv_number(t.impact_speed) + "\n";
        } else {
            out += "error,,,,\n";
        }
    }
    return out;
}

namespace {

std::string case_label(double h0, double v0, double tb) {
    return "h0=" + format_number(h0 / 1000.0) + "km v0=" + format_number(v0) + " tb=" +
           format_number(tb) + "s";
}

struct Computed {
    std::map<std::string, double> values;
    std::string error;
};

void add_checks(const ReferenceTable& table, std::size_t row, const std::string& label,
                const Computed& computed, std::vector<TableCheck>& out) {
    for (const auto& col : table.columns) {
        if (std::find(table.inputs.begin(), table.inputs.end(), col) != table.inputs.end()) continue;
        TableCheck c;
        c.table = table.name;
        c.case_label = label;
        c.quantity = col;
        c.reference = table.at(row, col);
        const auto it = computed.values.find(col);
        c.computed = it == computed.values.end() ? NAN : it->second;
        if (auto t = table.tolerances.find(col); t != table.tolerances.end()) c.tolerance = t->second;
        c.pass = c.tolerance ? c.tolerance->accepts(c.reference, c.computed) : std::isfinite(c.computed);
        out.push_back(std::move(c));
    }
    for (const auto& [quantity, bound] : table.bounds) {
        TableCheck c;
        c.table = table.name;
        c.case_label = label;
        c.quantity = quantity;
        c.reference = bound.max;
        const auto it = computed.values.find(quantity);
        c.computed = it == computed.values.end() ? NAN : it->second;
        c.bound = bound;
        c.pass = std::isfinite(c.computed) && c.computed < bound.max;
        out.push_back(std::move(c));
    }
}

vehicle::ProjectileSpec projectile_named(const std::string& name) {
    if (name == "hpv") return vehicle::hpv();
    if (name == "europrojectile") return vehicle::europrojectile();
    throw ValidationError("unknown reference projectile '" + name + "'");
}

std::string attribute(const ReferenceTable& t, const std::string& key) {
    const auto it = t.attributes.find(key);
    if (it == t.attributes.end()) {
        throw ValidationError("reference table '" + t.name + "' needs @" + key);
    }
    return it->second;
}

// Rocket performance with a warhead descent.
Computed compute_performance(const ReferenceTable& t, std::size_t r, double dt) {
    Computed c;
    const auto projectile = projectile_named(attribute(t, "projectile"));
    const auto ascent = flight::integrate_ascent(
        vehicle::dlsrr30(t.at(r, "burn_s")),
        {t.at(r, "h0_m"), t.at(r, "v0_mps"), t.at(r, "angle_deg")}, dt);
    const auto impact = flight::integrate_descent(projectile, ascent.apogee, dt);
    c.values = {{"flight_time_s", impact.impact.t},
                {"drag_loss_mps", ascent.drag_loss},
                {"gravity_loss_mps", ascent.gravity_loss},
                {"velocity_gain_mps", ascent.velocity_gain},
                {"apogee_km", ascent.apogee_altitude() / 1000.0},
                {"range_km", impact.range / 1000.0}};
    return c;
}

// Warhead descent from the tabulated apogee state, offset by the computed ascent downrange.
Computed compute_warhead(const ReferenceTable& t, std::size_t r, double dt) {
    Computed c;
    const auto projectile = projectile_named(attribute(t, "projectile"));
    const auto ascent = flight::integrate_ascent(
        vehicle::dlsrr30(t.at(r, "burn_s")),
        {t.at(r, "h0_m"), t.at(r, "v0_mps"), t.at(r, "angle_deg")}, dt);
    flight::FlightState apogee{0.0, ascent.apogee_downrange(), t.at(r, "apogee_km") * 1000.0,
                               t.at(r, "apogee_mps"), 0.0, projectile.mass};
    const auto impact = flight::integrate_descent(projectile, apogee, dt);
    c.values = {{"range_km", impact.range / 1000.0},
                {"impact_mps", impact.impact_speed},
                {"dv_loss_mps", impact.descent_velocity_loss},
                {"descent_drag_mps", impact.descent_drag_loss}};
    return c;
}

// Cylinder-base heat sink over the burn.
Computed compute_heating(const ReferenceTable& t, std::size_t r, double dt) {
    Computed c;
    const auto ascent = flight::integrate_ascent(
        vehicle::dlsrr30(t.at(r, "burn_s")),
        {t.at(r, "h0_m"), t.at(r, "v0_mps"), t.at(r, "angle_deg")}, dt);
    const auto sink = thermal::heat_sink_march(ascent.series);
    c.values = {{"final_c", sink.final_temperature - 273.15}, {"energy_jpm2", sink.energy}};
    return c;
}

}  // namespace

std::vector<TableCheck> check_tables(const fs::path& reference_dir, double dt) {
    std::vector<TableCheck> checks;
    std::vector<fs::path> files;
    if (!fs::is_directory(reference_dir)) {
        throw IoError("reference directory '" + reference_dir.string() + "' does not exist");
    }
    for (const auto& entry : fs::directory_iterator(reference_dir)) {
        if (entry.path().extension() == ".dat") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no reference tables in '" + reference_dir.string() + "'");

    for (const auto& path : files) {
        const auto table = load_reference(path);
        const std::string kind = attribute(table, "kind");
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const std::string label =
                case_label(table.at(r, "h0_m"), table.at(r, "v0_mps"), table.at(r, "burn_s"));
            Computed computed;
            try {
                if (kind == "performance") computed = compute_performance(table, r, dt);
                else if (kind == "warhead") computed = compute_warhead(table, r, dt);
                else if (kind == "heating") computed = compute_heating(table, r, dt);
                else throw ValidationError("unknown reference kind '" + kind + "' in " + path.string());
            } catch (const ValidationError&) {
                throw;
            } catch (const Error& e) {
                computed.error = e.what();
            }
            add_checks(table, r, label, computed, checks);
        }
    }
    return checks;
}

namespace {

double resolve_angle(const Scenario& s, const vehicle::RocketSpec& rocket, double h0, double v0,
                     std::optional<flight::AngleOptimization>* trace) {
    if (s.firing_angle) return *s.firing_angle;
    auto opt = flight::optimize_firing_angle(rocket, h0, v0, s.projectile, s.dt, s.angle_grid,
                                          s.flight_options());
    const double best = opt.best_angle;
    if (trace) *trace = std::move(opt);
    return best;
}

AscentSummary summarize(const flight::AscentResult& a, double angle) {
    return {angle,           a.apogee_altitude(), a.apogee_speed(), a.apogee_downrange(),
            a.time_to_apogee(), a.velocity_gain,   a.drag_loss,      a.gravity_loss};
}

ImpactSummary summarize(const flight::ImpactResult& i) {
    return {i.range, i.impact_speed, i.descent_time, i.impact.t, i.descent_drag_loss,
            i.descent_velocity_loss};
}

}  // namespace

RunReport run(Subcommand cmd, const Scenario& s, const fs::path& out_dir) {
    s.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw IoError("cannot create output directory '" + out_dir.string() + "'");
    }

    RunReport report;
    report.subcommand = cmd;
    report.version = version();
    report.input = emit(s);

    auto write = [&](const std::string& name, const std::string& contents) {
        text::write_file((out_dir / name).string(), contents);
        report.files.push_back(name);
    };

    switch (cmd) {
        case Subcommand::ascent:
        case Subcommand::impact:
        case Subcommand::thermal: {
            std::optional<flight::AngleOptimization> trace;
            const double angle = resolve_angle(s, s.rocket, s.release_altitude, s.release_speed, &trace);
            report.optimized = trace.has_value();
            if (trace) write("angles.csv", angles_csv(*trace));
            const auto ascent = flight::integrate_ascent(s.rocket, s.launch(angle), s.dt, s.flight_options());
            report.ascent = summarize(ascent, angle);
            write("ascent.csv", flight::to_csv(ascent.series));
            if (cmd == Subcommand::impact) {
                const auto impact = flight::integrate_descent(s.projectile, ascent.apogee, s.dt, s.flight_options());
                report.impact = summarize(impact);
                write("descent.csv", flight::to_csv(impact.series));
            }
            if (cmd == Subcommand::thermal) {
                const auto consts = s.thermal_constants();
                const auto series = thermal::analyze(ascent.series, s.stations, consts, s.rocket.nose_length);
                ThermalSummary summary;
                double cylinder_length = 1.0;
                for (std::size_t i = 0; i < s.stations.size(); ++i) {
                    summary.stations.push_back({s.stations[i].label(), series.max_temperature(i),
                                                series.peak_time(i)});
                    if (s.stations[i].kind == thermal::StationKind::cylinder_base) {
                        cylinder_length = s.stations[i].length;
                    }
                }
                const auto sink = thermal::heat_sink_march(
                    ascent.series, thermal::kCylinderArealDensity, thermal::kWallCp,
                    thermal::kInitialWallTemperature, cylinder_length, consts);
                summary.final_cylinder_temperature = sink.final_temperature;
                summary.cylinder_energy = sink.energy;
                report.thermal = std::move(summary);
                write("thermal.csv", thermal::to_csv(series));
            }
            break;
        }
        case Subcommand::sweep: {
            if (!s.sweep) throw ValidationError("sweep: scenario has no [sweep] section");
            for (double h0 : s.sweep->altitudes) {
                for (double v0 : s.sweep->speeds) {
                    for (double tb : s.sweep->burn_times) {
                        SweepCell cell;
                        cell.altitude = h0;
                        cell.speed = v0;
                        cell.burn_time = tb;
                        try {
                            auto rocket = s.rocket;
                            rocket.burn_time = tb;
                            const double angle = resolve_angle(s, rocket, h0, v0, nullptr);
                            const auto ascent = flight::integrate_ascent(rocket, {h0, v0, angle}, s.dt, s.flight_options());
                            const auto impact = flight::integrate_descent(s.projectile, ascent.apogee, s.dt, s.flight_options());
                            cell.ok = true;
                            cell.firing_angle = angle;
                            cell.range = impact.range;
                            cell.apogee_altitude = ascent.apogee_altitude();
                            cell.impact_speed = impact.impact_speed;
                        } catch (const Error& e) {
                            cell.error = e.what();
                        }
                        report.sweep.push_back(std::move(cell));
                    }
                }
            }
            write("sweep.csv", sweep_csv(report.sweep));
            break;
        }
        case Subcommand::tables: {
            fs::path ref = s.reference_dir.empty() ? data_dir() / "reference" : fs::path(s.reference_dir);
            if (ref.is_relative() && !s.reference_dir.empty() && !s.base_dir.empty()) ref = s.base_dir / ref;
            report.checks = check_tables(ref, s.dt);
            write("tables.csv", tables_csv(report.checks));
            break;
        }
    }
    report.files.push_back("report.json");
    text::write_file((out_dir / "report.json").string(), report.to_json());
    return report;
}

}  // namespace dlsrr::scenario
