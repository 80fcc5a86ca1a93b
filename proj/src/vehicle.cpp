#include "dlsrr/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlsrr/error.hpp"
#include "text.hpp"

namespace dlsrr::vehicle {

DragTable::DragTable(std::vector<DragKnot> knots, std::string name)
    : knots_(std::move(knots)), name_(std::move(name)) {
    if (knots_.size() < 2) {
        throw ValidationError("drag table '" + name_ + "' needs at least 2 knots");
    }
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!(knots_[i].cd > 0.0)) {
            throw ValidationError("drag table '" + name_ + "': cd must be positive at knot " +
                                  std::to_string(i));
        }
        if (!(knots_[i].mach >= 0.0)) {
            throw ValidationError("drag table '" + name_ + "': negative Mach at knot " +
                                  std::to_string(i));
        }
        if (i > 0 && !(knots_[i].mach > knots_[i - 1].mach)) {
            throw ValidationError("drag table '" + name_ +
                                  "': Mach numbers must be strictly increasing (knot " +
                                  std::to_string(i) + ")");
        }
    }
}

double DragTable::lookup(double mach) const {
    if (mach <= knots_.front().mach) return knots_.front().cd;
    if (mach >= knots_.back().mach) return knots_.back().cd;
    const auto upper = std::upper_bound(knots_.begin(), knots_.end(), mach,
                                        [](double m, const DragKnot& k) { return m < k.mach; });
    const DragKnot& hi = *upper;
    const DragKnot& lo = *(upper - 1);
    if (mach == lo.mach) return lo.cd;
    const double w = (mach - lo.mach) / (hi.mach - lo.mach);
    return lo.cd + w * (hi.cd - lo.cd);
}

double cd_lookup(const DragTable& table, double mach) {
    if (!(mach >= 0.0)) throw DomainError("cd_lookup: Mach number must be non-negative");
    return table.lookup(mach);
}

namespace {

std::vector<DragKnot> quarter_mach_knots(std::initializer_list<double> cds) {
    std::vector<DragKnot> knots;
    double mach = 0.25;
    for (double cd : cds) {
        knots.push_back({mach, cd});
        mach += 0.25;
    }
    return knots;
}

}  // namespace

const DragTable& rocket30_drag() {
    static const DragTable table(
        quarter_mach_knots({.265, .260, .261, .380, .432, .404, .381, .352, .328, .308, .289, .273,
                            .259, .246, .235, .225, .216, .208, .200, .193, .187, .181, .175, .168,
                            .163, .159, .154, .150, .147, .144, .141, .139, .137, .135, .133, .131}),
        "rocket30");
    return table;
}

const DragTable& hpv_drag() {
    static const DragTable table(
        quarter_mach_knots({.208, .203, .202, .289, .336, .325, .292, .265, .243, .225, .208,
                            .194, .181, .171, .161, .152, .145, .139, .133, .127, .122, .117,
                            .112, .106, .103, .099, .095, .091, .089, .087, .085, .083}),
        "hpv");
    return table;
}

const DragTable& europrojectile_drag() {
    // Source data lists the Mach 7.50 knot as "7.05".
    static const DragTable table(
        quarter_mach_knots({.184, .182, .181, .264, .297, .268, .242, .219, .200, .184, .169,
                            .156, .145, .135, .126, .119, .112, .106, .100, .095, .091, .086,
                            .081, .076, .072, .069, .066, .062, .060, .058, .056, .055}),
        "europrojectile");
    return table;
}

std::optional<DragTable> builtin_drag_table(std::string_view name) {
    if (name == "rocket30") return rocket30_drag();
    if (name == "hpv") return hpv_drag();
    if (name == "europrojectile") return europrojectile_drag();
    return std::nullopt;
}

DragTable load_drag_table(const std::string& path) {
    const std::string contents = text::read_file(path);
    std::vector<DragKnot> knots;
    int line_no = 0;
    for (auto line : text::lines(contents)) {
        ++line_no;
        line = text::strip_comment(line);
        if (line.empty()) continue;
        const auto fields = text::split_whitespace(line);
        if (fields.size() != 2) throw ParseError(path + ": expected 'mach cd'", line_no);
        const auto mach = text::to_double(fields[0]);
        const auto cd = text::to_double(fields[1]);
        if (!mach || !cd) throw ParseError(path + ": non-numeric drag knot", line_no);
        knots.push_back({*mach, *cd});
    }
    return DragTable(std::move(knots), path);
}

double RocketSpec::frontal_area() const {
    return std::numbers::pi / 4.0 * diameter * diameter;
}

void RocketSpec::validate() const {
    if (!(total_mass > 0.0)) throw ValidationError("rocket: total_mass must be positive");
    if (!(diameter > 0.0)) throw ValidationError("rocket: diameter must be positive");
    if (!(propellant_fraction > 0.0 && propellant_fraction < 1.0)) {
        throw ValidationError("rocket: propellant_fraction must lie in (0, 1), got " +
                              std::to_string(propellant_fraction));
    }
    if (!(exhaust_velocity > 0.0)) throw ValidationError("rocket: exhaust_velocity must be positive");
    if (!(burn_time > 0.0)) throw ValidationError("rocket: burn_time must be positive");
    if (!(nose_radius > 0.0)) throw ValidationError("rocket: nose_radius must be positive");
    if (!(nose_length > 0.0)) throw ValidationError("rocket: nose_length must be positive");
    if (!(body_length > 0.0)) throw ValidationError("rocket: body_length must be positive");
}

double ProjectileSpec::frontal_area() const {
    return std::numbers::pi / 4.0 * diameter * diameter;
}

void ProjectileSpec::validate() const {
    if (!(mass > 0.0)) throw ValidationError("projectile: mass must be positive");
    if (!(diameter > 0.0)) throw ValidationError("projectile: diameter must be positive");
}

RocketSpec dlsrr30(double burn_time) {
    return RocketSpec{
        .total_mass = 300.0,
        .diameter = 0.30,
        .propellant_fraction = 0.50,
        .exhaust_velocity = 2100.0,
        .burn_time = burn_time,
        .drag = rocket30_drag(),
        .nose_radius = 0.02,
        .nose_length = 1.0,
        .body_length = 3.3,
    };
}

ProjectileSpec hpv() { return {11.4, 0.0783, hpv_drag()}; }

ProjectileSpec europrojectile() { return {16.5, 0.075, europrojectile_drag()}; }

double tsiolkovsky_gain(double exhaust_velocity, double propellant_fraction) {
    if (!(exhaust_velocity > 0.0)) {
        throw DomainError("tsiolkovsky_gain: exhaust velocity must be positive");
    }
    if (!(propellant_fraction >= 0.0 && propellant_fraction < 1.0)) {
        throw DomainError("tsiolkovsky_gain: propellant fraction must lie in [0, 1)");
    }
    return -exhaust_velocity * std::log1p(-propellant_fraction);
}

EuroprojectileVolumes europrojectile_volumes(double diameter) {
    const double d3 = diameter * diameter * diameter;
    return {kTailFrustumVolume * d3, kBodyCylinderVolume * d3, kHaackNoseVolume * d3,
            kEuroprojectileVolume * d3};
}

double europrojectile_mass(double diameter, double density) {
    if (!(diameter >= 0.0) || !(density > 0.0)) {
        throw DomainError("europrojectile_mass: diameter must be >= 0 and density > 0");
    }
    return europrojectile_volumes(diameter).total * density;
}

double burn_rate(const PropellantRecord& record, double pressure) {
    if (!record.has_burn_rate()) {
        throw UnsupportedRecordError("propellant '" + record.name + "' has no burn-rate data");
    }
    if (!(pressure > 0.0)) throw DomainError("burn_rate: pressure must be positive");
    if (pressure == record.reference_pressure) return *record.burn_rate_ref;
    return *record.burn_rate_ref * std::pow(pressure / record.reference_pressure, *record.exponent);
}

namespace {

std::optional<double> optional_field(std::string_view field, int line_no, const char* what) {
    if (field == "NA") return std::nullopt;
    const auto value = text::to_double(field);
    if (!value) throw ParseError(std::string("propellant: bad ") + what + " '" + std::string(field) + "'", line_no);
    return value;
}

double required_field(std::string_view field, int line_no, const char* what) {
    const auto value = optional_field(field, line_no, what);
    if (!value) throw ParseError(std::string("propellant: ") + what + " may not be NA", line_no);
    return *value;
}

}  // namespace

std::vector<PropellantRecord> parse_propellants(std::string_view contents) {
    std::vector<PropellantRecord> records;
    int line_no = 0;
    for (auto line : text::lines(contents)) {
        ++line_no;
        line = text::trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = text::split(line, '|');
        if (fields.size() != 6) {
            throw ParseError("propellant: expected 6 '|'-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        PropellantRecord record;
        record.name = std::string(fields[0]);
        if (record.name.empty()) throw ParseError("propellant: empty name", line_no);
        record.flame_temperature = required_field(fields[1], line_no, "flame temperature");
        record.exhaust_velocity = required_field(fields[2], line_no, "exhaust velocity");
        record.burn_rate_ref = optional_field(fields[3], line_no, "burn rate");
        record.reference_pressure = required_field(fields[4], line_no, "reference pressure");
        record.exponent = optional_field(fields[5], line_no, "exponent");
        if (record.burn_rate_ref.has_value() != record.exponent.has_value()) {
            throw ParseError("propellant: burn rate and exponent must both be present or both NA",
                             line_no);
        }
        if (record.burn_rate_ref && !(*record.burn_rate_ref > 0.0)) {
            throw ParseError("propellant: burn rate must be positive", line_no);
        }
        if (record.exponent && !(*record.exponent >= 0.0 && *record.exponent <= 1.0)) {
            throw ParseError("propellant: exponent must lie in [0, 1]", line_no);
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<PropellantRecord> load_propellants(const std::string& path) {
    return parse_propellants(text::read_file(path));
}

}  // namespace dlsrr::vehicle
