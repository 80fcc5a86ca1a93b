#include "dlsrr/flight.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "dlsrr/error.hpp"

namespace dlsrr::flight {

double FlightState::speed() const { return std::hypot(vx, vy); }

void LaunchCondition::validate() const {
    if (!(release_altitude >= 0.0 && release_altitude <= 30'000.0)) {
        throw ValidationError("launch: release altitude must lie in [0, 30000] m");
    }
    if (!(release_speed >= 0.0)) throw ValidationError("launch: release speed must be >= 0");
    if (!(firing_angle > 0.0 && firing_angle < 90.0)) {
        throw ValidationError("launch: firing angle must lie in (0, 90) degrees");
    }
}

Thrust thrust(const vehicle::RocketSpec& spec, double t) {
    const double mdot = spec.mass_flow();
    if (t >= 0.0 && t <= spec.burn_time) return {mdot * spec.exhaust_velocity, mdot};
    return {0.0, 0.0};
}

double drag_force(const FlightState& state, double area, const vehicle::DragTable& table,
                  const atmosphere::AtmosphereState& atm) {
    const double v = state.speed();
    if (v == 0.0) return 0.0;
    return table.lookup(v / atm.speed_of_sound) * atm.density * v * v * area / 2.0;
}

double gravity_loss(double release_speed, double velocity_gain, double drag_loss,
                    double release_altitude, double apogee_altitude, double apogee_speed,
                    double gravity) {
    const double climb = 2.0 * gravity * (apogee_altitude - release_altitude);
    return (release_speed + velocity_gain) - drag_loss -
           std::sqrt(climb + apogee_speed * apogee_speed);
}

namespace {

struct Body {
    double area;
    const vehicle::DragTable* drag;
    double dry_mass;
    double mass_flow;      // kg/s while burning
    double thrust_force;   // N while burning
    double burn_time;      // s after the start of the integration
};

enum class StopAt { apogee, ground };

struct Integration {
    TrajectorySeries series;
    FlightState end;
    double thrust_integral = 0.0;
    double drag_integral = 0.0;
};

// Above the model ceiling the air is treated as the 140 km air (effectively vacuum);
// below ground (only inside the final refined step) as sea-level air.
atmosphere::AtmosphereState ambient(double y) {
    return atmosphere::sample(std::clamp(y, 0.0, atmosphere::kCeiling));
}

FlightState lerp(const FlightState& a, const FlightState& b, double w) {
    auto mix = [w](double p, double q) { return p + w * (q - p); };
    return {mix(a.t, b.t), mix(a.x, b.x), mix(a.y, b.y),
            mix(a.vx, b.vx), mix(a.vy, b.vy), mix(a.mass, b.mass)};
}

TrajectoryRecord record_at(const FlightState& s, const Body& body, const FlightOptions& options,
                           double thrust_now) {
    const auto atm = ambient(s.y);
    const double fd = options.drag_enabled ? drag_force(s, body.area, *body.drag, atm) : 0.0;
    return {s, s.speed() / atm.speed_of_sound, atm.density, atm.temperature, fd, thrust_now};
}

Integration integrate(const Body& body, FlightState s, StopAt stop, double dt,
                      const FlightOptions& options, double heading_x, double heading_y) {
    if (!(dt > 0.0)) throw DomainError("integration step must be positive");
    Integration out;
    out.series.step = dt;
    out.series.burn_time = options.thrust_enabled ? body.burn_time : 0.0;
    const double t0 = s.t;
    const double g = options.gravity;

    for (long n = 0;; ++n) {
        const double elapsed = static_cast<double>(n) * dt;
        if (elapsed > options.max_time) {
            throw DivergenceError(stop == StopAt::apogee
                                      ? "ascent did not reach apogee within the time limit"
                                      : "descent did not reach the ground within the time limit");
        }
        s.t = t0 + elapsed;

        const double burn =
            options.thrust_enabled ? std::clamp((body.burn_time - elapsed) / dt, 0.0, 1.0) : 0.0;
        const double ft = body.thrust_force * burn;
        const TrajectoryRecord rec = record_at(s, body, options, ft);
        out.series.records.push_back(rec);

        const double v = s.speed();
        const double ux = v > 0.0 ? s.vx / v : heading_x;
        const double uy = v > 0.0 ? s.vy / v : heading_y;
        const double along = (ft - rec.drag_force) / s.mass;

        FlightState next = s;
        next.t = t0 + static_cast<double>(n + 1) * dt;
        next.x = s.x + s.vx * dt;
        next.y = s.y + s.vy * dt;
        next.vx = s.vx + along * ux * dt;
        next.vy = s.vy + (along * uy - g) * dt;
        next.mass = std::max(s.mass - body.mass_flow * burn * dt, body.dry_mass);

        const double drag_step = rec.drag_force / s.mass * dt;
        out.thrust_integral += ft * dt / next.mass;

        double w = -1.0;
        if (stop == StopAt::apogee) {
            if (next.y < 0.0) throw GroundImpactError("vehicle reached the ground before apogee");
            if (next.vy <= 0.0) w = s.vy > 0.0 ? s.vy / (s.vy - next.vy) : 0.0;
        } else if (next.y <= 0.0) {
            w = s.y > 0.0 ? s.y / (s.y - next.y) : 0.0;
        }

        if (w >= 0.0) {
            out.drag_integral += w * drag_step;
            out.end = lerp(s, next, w);
            if (stop == StopAt::apogee) out.end.vy = 0.0;
            else out.end.y = 0.0;
            const double end_elapsed = out.end.t - t0;
            const double thrust_end = options.thrust_enabled && end_elapsed < body.burn_time
                                          ? body.thrust_force
                                          : 0.0;
            out.series.records.push_back(record_at(out.end, body, options, thrust_end));
            return out;
        }
        out.drag_integral += drag_step;
        s = next;
    }
}

}  // namespace

AscentResult integrate_ascent(const vehicle::RocketSpec& spec, const LaunchCondition& launch,
                              double dt, const FlightOptions& options) {
    spec.validate();
    launch.validate();
    if (!(dt > 0.0)) throw DomainError("integrate_ascent: dt must be positive");

    const double angle = launch.firing_angle * std::numbers::pi / 180.0;
    const double hx = std::cos(angle);
    const double hy = std::sin(angle);
    const Body body{spec.frontal_area(), &spec.drag, spec.dry_mass(), spec.mass_flow(),
                    spec.mass_flow() * spec.exhaust_velocity, spec.burn_time};
    const FlightState start{0.0, 0.0, launch.release_altitude, launch.release_speed * hx,
                            launch.release_speed * hy, spec.total_mass};

    Integration run = integrate(body, start, StopAt::apogee, dt, options, hx, hy);

    AscentResult result;
    result.apogee = run.end;
    result.velocity_gain = run.thrust_integral;
    result.drag_loss = run.drag_integral;
    result.gravity_loss =
        gravity_loss(launch.release_speed, result.velocity_gain, result.drag_loss,
                     launch.release_altitude, run.end.y, run.end.speed(), options.gravity);
    result.series = std::move(run.series);
    return result;
}

ImpactResult integrate_descent(const vehicle::ProjectileSpec& projectile, const FlightState& apogee,
                               double dt, const FlightOptions& options) {
    projectile.validate();
    if (!(dt > 0.0)) throw DomainError("integrate_descent: dt must be positive");
    if (!(apogee.y > 0.0)) throw DomainError("integrate_descent: release altitude must be positive");
    if (!(std::abs(apogee.vy) <= 1e-6)) {
        throw DomainError("integrate_descent: release state must have zero vertical velocity");
    }

    const Body body{projectile.frontal_area(), &projectile.drag, projectile.mass, 0.0, 0.0, 0.0};
    FlightState start = apogee;
    start.vy = 0.0;
    start.mass = projectile.mass;
    FlightOptions unpowered = options;
    unpowered.thrust_enabled = false;

    Integration run = integrate(body, start, StopAt::ground, dt, unpowered, 1.0, 0.0);

    ImpactResult result;
    result.impact = run.end;
    result.range = run.end.x;
    result.impact_speed = run.end.speed();
    result.descent_time = run.end.t - apogee.t;
    result.descent_drag_loss = run.drag_integral;
    const double free_fall_speed =
        std::sqrt(apogee.vx * apogee.vx + 2.0 * options.gravity * apogee.y);
    result.descent_velocity_loss = free_fall_speed - result.impact_speed;
    result.series = std::move(run.series);
    return result;
}

std::vector<double> angle_grid(double first, double last, double step) {
    if (!(step > 0.0) || !(last >= first)) {
        throw DomainError("angle grid: need step > 0 and last >= first");
    }
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9));
    for (long i = 0; i <= count; ++i) grid.push_back(first + static_cast<double>(i) * step);
    return grid;
}

AngleOptimization optimize_firing_angle(const vehicle::RocketSpec& spec, double release_altitude,
                                        double release_speed,
                                        const vehicle::ProjectileSpec& projectile, double dt,
                                        std::span<const double> grid,
                                        const FlightOptions& options) {
    if (grid.empty()) throw DomainError("optimize_firing_angle: empty angle grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 90.0)) {
            throw DomainError("optimize_firing_angle: angles must lie in (0, 90) degrees");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw DomainError("optimize_firing_angle: angle grid must be strictly increasing");
        }
    }

    AngleOptimization out;
    bool found = false;
    for (double angle : grid) {
        AngleTrial trial;
        trial.angle = angle;
        try {
            const auto ascent = integrate_ascent(
                spec, LaunchCondition{release_altitude, release_speed, angle}, dt, options);
            const auto impact = integrate_descent(projectile, ascent.apogee, dt, options);
            trial.ok = true;
            trial.range = impact.range;
            trial.apogee_altitude = ascent.apogee_altitude();
            trial.apogee_speed = ascent.apogee_speed();
            trial.impact_speed = impact.impact_speed;
        } catch (const Error& e) {
            trial.error = e.what();
        }
        if (trial.ok && (!found || trial.range > out.best_range)) {
            found = true;
            out.best_angle = angle;
            out.best_range = trial.range;
        }
        out.trials.push_back(std::move(trial));
    }
    if (!found) throw OptimizationError("optimize_firing_angle: every firing angle failed");
    return out;
}

std::string to_csv(const TrajectorySeries& series) {
    std::string out = "t,x,y,vx,vy,mass,mach,rho,T_a,F_d,F_t\n";
    char line[512];
    for (const auto& r : series.records) {
        const auto& s = r.state;
        std::snprintf(line, sizeof line, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                      s.t, s.x, s.y, s.vx, s.vy, s.mass, r.mach, r.density, r.temperature,
                      r.drag_force, r.thrust);
        out += line;
    }
    return out;
}

}  // namespace dlsrr::flight
