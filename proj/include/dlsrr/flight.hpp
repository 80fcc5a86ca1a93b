#pragma once

#include <span>
#include <string>
#include <vector>

#include "dlsrr/atmosphere.hpp"
#include "dlsrr/vehicle.hpp"

namespace dlsrr::flight {

inline constexpr double kGravity = 9.80665;     // m/s^2, constant with altitude
inline constexpr double kDefaultStep = 0.1;     // s
inline constexpr double kMaxFlightTime = 1200.0;

/// Point-mass state in a flat-Earth frame: x downrange, y altitude.
struct FlightState {
    double t = 0.0;      // s
    double x = 0.0;      // m
    double y = 0.0;      // m
    double vx = 0.0;     // m/s
    double vy = 0.0;     // m/s
    double mass = 0.0;   // kg

    double speed() const;
};

struct LaunchCondition {
    double release_altitude;   // m, h0
    double release_speed;      // m/s, v0
    double firing_angle;       // degrees above horizontal

    void validate() const;
};

struct TrajectoryRecord {
    FlightState state;
    double mach;
    double density;       // kg/m^3
    double temperature;   // K
    double drag_force;    // N
    double thrust;        // N, mean over the step that starts here
};

/// Records at fixed step `step`; the final record is the refined end event
/// (apogee for ascents, ground impact for descents).
struct TrajectorySeries {
    double step = kDefaultStep;
    double burn_time = 0.0;   // s, zero for unpowered flight
    std::vector<TrajectoryRecord> records;
};

/// Toggles used by the closed-form oracle tests.
struct FlightOptions {
    bool drag_enabled = true;
    bool thrust_enabled = true;
    double gravity = kGravity;
    double max_time = kMaxFlightTime;
};

struct AscentResult {
    FlightState apogee;
    double velocity_gain = 0.0;   // m/s, v_r from the thrust integral
    double drag_loss = 0.0;       // m/s, v_d up to apogee
    double gravity_loss = 0.0;    // m/s, v_g from the energy balance
    TrajectorySeries series;

    double apogee_altitude() const { return apogee.y; }
    double apogee_speed() const { return apogee.speed(); }
    double apogee_downrange() const { return apogee.x; }
    double time_to_apogee() const { return apogee.t; }
};

struct ImpactResult {
    FlightState impact;
    double range = 0.0;                  // m, downrange of impact from the release point
    double impact_speed = 0.0;           // m/s
    double descent_time = 0.0;           // s, apogee to impact
    double descent_drag_loss = 0.0;      // m/s, time integral of drag deceleration
    double descent_velocity_loss = 0.0;  // m/s, drag-free impact speed minus impact speed
    TrajectorySeries series;
};

struct Thrust {
    double force;      // N
    double mass_flow;  // kg/s
};

/// Constant-mass-flow motor: (M0 f_p / t_b) v_e during [0, t_b], zero after.
Thrust thrust(const vehicle::RocketSpec& spec, double t);

/// C_d(v / v_s) rho v^2 A / 2. The caller directs it against the velocity.
double drag_force(const FlightState& state, double area, const vehicle::DragTable& table,
                  const atmosphere::AtmosphereState& atm);

/// Gravity loss from the energy balance between the launch and the apogee:
/// (v0 + v_r) - v_d - sqrt(2 g (h_A - h0) + v_A^2).
double gravity_loss(double release_speed, double velocity_gain, double drag_loss,
                    double release_altitude, double apogee_altitude, double apogee_speed,
                    double gravity = kGravity);

/// Forward-Euler powered ascent until the vertical velocity crosses zero.
/// Throws GroundImpactError if the vehicle reaches y < 0 first and
/// DivergenceError past FlightOptions::max_time.
AscentResult integrate_ascent(const vehicle::RocketSpec& spec, const LaunchCondition& launch,
                              double dt = kDefaultStep, const FlightOptions& options = {});

/// Forward-Euler ballistic descent of a projectile released at `apogee`
/// (vertical velocity zero, altitude positive) until it reaches the ground.
ImpactResult integrate_descent(const vehicle::ProjectileSpec& projectile,
                               const FlightState& apogee, double dt = kDefaultStep,
                               const FlightOptions& options = {});

struct AngleTrial {
    double angle = 0.0;
    bool ok = false;
    double range = 0.0;             // m, warhead impact downrange
    double apogee_altitude = 0.0;   // m
    double apogee_speed = 0.0;      // m/s
    double impact_speed = 0.0;      // m/s
    std::string error;              // set when !ok
};

struct AngleOptimization {
    double best_angle = 0.0;
    double best_range = 0.0;
    std::vector<AngleTrial> trials;
};

/// Runs ascent + warhead descent for every angle of a strictly increasing grid in
/// (0, 90) degrees and returns the angle with the longest warhead range; ties go to
/// the smaller angle. Failed angles are recorded and skipped; if all fail an
/// OptimizationError is thrown.
AngleOptimization optimize_firing_angle(const vehicle::RocketSpec& spec, double release_altitude,
                                        double release_speed,
                                        const vehicle::ProjectileSpec& projectile, double dt,
                                        std::span<const double> angle_grid,
                                        const FlightOptions& options = {});

/// Degrees from `first` to `last` inclusive in steps of `step`.
std::vector<double> angle_grid(double first, double last, double step);

/// CSV with header t,x,y,vx,vy,mass,mach,rho,T_a,F_d,F_t; 6 significant digits.
std::string to_csv(const TrajectorySeries& series);

}  // namespace dlsrr::flight
