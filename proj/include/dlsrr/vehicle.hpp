#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dlsrr::vehicle {

struct DragKnot {
    double mach;
    double cd;

    bool operator==(const DragKnot&) const = default;
};

/// Piecewise-linear drag coefficient as a function of Mach number.
/// Knots are strictly increasing in Mach with positive coefficients; lookups
/// outside the knot range clamp to the end values.
class DragTable {
public:
    /// Throws ValidationError when the knot invariants do not hold.
    explicit DragTable(std::vector<DragKnot> knots, std::string name = {});

    double lookup(double mach) const;

    std::span<const DragKnot> knots() const { return knots_; }
    const std::string& name() const { return name_; }

    bool operator==(const DragTable&) const = default;

private:
    std::vector<DragKnot> knots_;
    std::string name_;
};

/// cd_lookup; mach must be non-negative (DomainError otherwise).
double cd_lookup(const DragTable& table, double mach);

// Bundled drag tables, computed with RASAero for the bodies studied here.
const DragTable& rocket30_drag();         // 30 cm rocket
const DragTable& hpv_drag();              // hypervelocity projectile
const DragTable& europrojectile_drag();   // European hypersonic projectile

/// Resolve a bundled table by name ("rocket30", "hpv", "europrojectile").
std::optional<DragTable> builtin_drag_table(std::string_view name);

/// Two whitespace-separated columns (mach, cd) per line; '#' starts a comment.
DragTable load_drag_table(const std::string& path);

struct RocketSpec {
    double total_mass;           // kg, M0
    double diameter;             // m
    double propellant_fraction;  // f_p in (0, 1)
    double exhaust_velocity;     // m/s
    double burn_time;            // s
    DragTable drag;
    double nose_radius = 0.02;   // m, blunt nose tip
    double nose_length = 1.0;    // m
    double body_length = 3.3;    // m

    double frontal_area() const;
    double propellant_mass() const { return total_mass * propellant_fraction; }
    double dry_mass() const { return total_mass - propellant_mass(); }
    double mass_flow() const { return propellant_mass() / burn_time; }

    /// Throws ValidationError naming the violated invariant.
    void validate() const;

    bool operator==(const RocketSpec&) const = default;
};

struct ProjectileSpec {
    double mass;       // kg
    double diameter;   // m
    DragTable drag;

    double frontal_area() const;
    void validate() const;

    bool operator==(const ProjectileSpec&) const = default;
};

/// The 30 cm, 300 kg reference rocket with the given burn time.
RocketSpec dlsrr30(double burn_time);
/// 11.4 kg, 7.83 cm hypervelocity projectile.
ProjectileSpec hpv();
/// 16.5 kg, 7.5 cm tungsten Europrojectile.
ProjectileSpec europrojectile();

/// -v_e ln(1 - f_p). Throws DomainError unless 0 <= f_p < 1 and v_e > 0.
double tsiolkovsky_gain(double exhaust_velocity, double propellant_fraction);

// Europrojectile volume terms in units of d^3 (rounded as published).
inline constexpr double kTailFrustumVolume = 1.43;
inline constexpr double kBodyCylinderVolume = 1.62;
inline constexpr double kHaackNoseVolume = 0.50;
inline constexpr double kEuroprojectileVolume = 3.55;

struct EuroprojectileVolumes {
    double tail;   // m^3
    double body;
    double nose;
    double total;
};

EuroprojectileVolumes europrojectile_volumes(double diameter);

/// 3.55 d^3 rho, d in m and rho in kg/m^3.
double europrojectile_mass(double diameter, double density);

struct PropellantRecord {
    std::string name;
    double flame_temperature;                 // K
    double exhaust_velocity;                  // m/s, vacuum, 40 atm chamber, expansion 15
    std::optional<double> burn_rate_ref;      // mm/s at reference_pressure
    double reference_pressure = 40.0;         // atm
    std::optional<double> exponent;           // n

    bool has_burn_rate() const { return burn_rate_ref.has_value() && exponent.has_value(); }

    bool operator==(const PropellantRecord&) const = default;
};

/// r_b0 (P / P0)^n in mm/s, pressure in atm.
/// Throws UnsupportedRecordError for records without burn-rate data.
double burn_rate(const PropellantRecord& record, double pressure);

/// Parse a propellant data file: one record per line, fields separated by '|':
///   name | flame_temperature_K | exhaust_velocity_mps | burn_rate_mmps | reference_pressure_atm | n
/// "NA" marks an absent value. Lines starting with '#' and blank lines are skipped.
std::vector<PropellantRecord> parse_propellants(std::string_view text);
std::vector<PropellantRecord> load_propellants(const std::string& path);

}  // namespace dlsrr::vehicle
