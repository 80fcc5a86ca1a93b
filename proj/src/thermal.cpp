#include "dlsrr/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dlsrr/error.hpp"

namespace dlsrr::thermal {

namespace {

constexpr double kTimeEps = 1e-9;

double enthalpy_ratio(double h_aw, double h_w, double h_a) {
    if (h_aw - h_a <= 0.0) return 0.0;
    return (h_aw - h_w) / (h_aw - h_a);
}

// Turbulent bracket [ln Re - 1.7 ln(T*/T_a)]^-2.45 / (T*/T_a), shared by the
// cylinder and cone correlations.
double turbulent_factor(double re, double t_star_ratio) { return skin_friction(re, t_star_ratio) / 2.28; }

}  // namespace

std::optional<QkModel> parse_qk_model(std::string_view name) {
    if (name == "klein") return QkModel::klein;
    if (name == "sutton") return QkModel::sutton;
    if (name == "chapman") return QkModel::chapman;
    if (name == "detra") return QkModel::detra;
    return std::nullopt;
}

const char* to_string(QkModel model) {
    switch (model) {
        case QkModel::klein: return "klein";
        case QkModel::sutton: return "sutton";
        case QkModel::chapman: return "chapman";
        case QkModel::detra: return "detra";
    }
    return "klein";
}

double ThermalConstants::stagnation_constant(double v) const {
    switch (qk_model) {
        case QkModel::klein: return 1.83e-4;
        case QkModel::sutton: return 1.74e-4;
        case QkModel::chapman: return 1.63e-4;
        case QkModel::detra: return 1.45e-4 * std::pow(std::max(v, 0.0) / 1000.0, 0.15);
    }
    return 1.83e-4;
}

void ThermalConstants::validate() const {
    const double positive[] = {sigma, prandtl, gamma, mu_ref, t_ref, mu_exponent,
                               cylinder_coefficient, cone_coefficient, pressure_coefficient};
    for (double value : positive) {
        if (!(value > 0.0)) throw ValidationError("thermal constants must be positive");
    }
    if (!(rf_stagnation > 0.0 && rf_stagnation <= 1.0) ||
        !(rf_turbulent > 0.0 && rf_turbulent <= 1.0)) {
        throw ValidationError("recovery factors must lie in (0, 1]");
    }
    if (!air) throw ValidationError("thermal constants need an air enthalpy model");
}

double air_enthalpy(double temperature) { return kAirCp * temperature; }

Recovery recovery_conditions(const atmosphere::AtmosphereState& atm, double v, double rf,
                             const ThermalConstants& consts) {
    if (!(v >= 0.0)) throw DomainError("recovery_conditions: speed must be non-negative");
    const double h_aw = consts.enthalpy(atm.temperature) + rf * v * v / 2.0;
    return {h_aw, consts.air->temperature(h_aw)};
}

double recovery_temperature_approx(double ambient_temperature, double mach, double rf,
                                   double gamma) {
    return ambient_temperature * (1.0 + (gamma - 1.0) / 2.0 * rf * mach * mach);
}

double stagnation_flux(const atmosphere::AtmosphereState& atm, double v, double nose_radius,
                       double wall_temperature, double emissivity,
                       const ThermalConstants& consts) {
    if (!(nose_radius > 0.0)) throw DomainError("stagnation_flux: nose radius must be positive");
    if (!(atm.density >= 0.0)) throw DomainError("stagnation_flux: density must be non-negative");
    const double t4 = std::pow(wall_temperature, 4);
    const double radiated = emissivity * consts.sigma * t4;
    if (v <= 0.0) return -radiated;
    const double h_a = consts.enthalpy(atm.temperature);
    const double h_aw = recovery_conditions(atm, v, consts.rf_stagnation, consts).enthalpy;
    const double h_w = consts.enthalpy(wall_temperature);
    return consts.stagnation_constant(v) * std::sqrt(atm.density / nose_radius) * v * v * v *
               enthalpy_ratio(h_aw, h_w, h_a) -
           radiated;
}

double reynolds(double density, double v, double x) {
    if (!(x > 0.0)) throw DomainError("reynolds: length must be positive");
    return 70e6 * density * (v / 1000.0) * x;
}

double viscosity(double temperature, const ThermalConstants& consts) {
    return consts.mu_ref * std::pow(temperature / consts.t_ref, consts.mu_exponent);
}

double skin_friction(double re, double t_star_ratio) {
    if (!(re > 0.0) || !(t_star_ratio > 0.0)) {
        throw DomainError("skin_friction: Reynolds number and temperature ratio must be positive");
    }
    const double bracket = std::log(re) - 1.7 * std::log(t_star_ratio);
    if (!(bracket > 0.0)) {
        throw DomainError("skin_friction: outside correlation validity (ln Re - 1.7 ln(T*/T_a) <= 0)");
    }
    return 2.28 * std::pow(bracket, -2.45) / t_star_ratio;
}

double reference_temperature(double h_aw, double wall_temperature, double ambient_temperature,
                             const ThermalConstants& consts) {
    const double h_star = 0.22 * h_aw + 0.50 * consts.enthalpy(wall_temperature) +
                          0.28 * consts.enthalpy(ambient_temperature);
    return consts.air->temperature(h_star);
}

double turbulent_flux_cylinder(const atmosphere::AtmosphereState& atm, double v, double x,
                               double wall_temperature, const ThermalConstants& consts) {
    if (v <= 0.0 || atm.density <= 0.0) return 0.0;
    const double h_a = consts.enthalpy(atm.temperature);
    const double h_aw = recovery_conditions(atm, v, consts.rf_turbulent, consts).enthalpy;
    const double h_w = consts.enthalpy(wall_temperature);
    const double ratio = reference_temperature(h_aw, wall_temperature, atm.temperature, consts) /
                         atm.temperature;
    const double factor = turbulent_factor(reynolds(atm.density, v, x), ratio);
    return consts.cylinder_coefficient * factor * atm.density * v * v * v *
           enthalpy_ratio(h_aw, h_w, h_a);
}

double cone_inclination(double y, double nose_length) {
    if (!(nose_length > 0.0)) throw DomainError("cone_inclination: nose length must be positive");
    if (!(y >= 0.0 && y <= nose_length)) {
        throw DomainError("cone_inclination: station must lie on the nose");
    }
    return 0.3 * (1.0 - y / nose_length);
}

double cone_flux(const atmosphere::AtmosphereState& atm, double v, double y,
                 double wall_temperature, double emissivity, const ThermalConstants& consts,
                 double nose_length) {
    const double theta = cone_inclination(y, nose_length);
    const double radiated = emissivity * consts.sigma * std::pow(wall_temperature, 4);
    if (v <= 0.0 || atm.density <= 0.0) return -radiated;
    const double h_a = consts.enthalpy(atm.temperature);
    const double h_aw = recovery_conditions(atm, v, consts.rf_turbulent, consts).enthalpy;
    const double h_w = consts.enthalpy(wall_temperature);
    const double ratio = reference_temperature(h_aw, wall_temperature, atm.temperature, consts) /
                         atm.temperature;
    const double re = reynolds(atm.density, v, std::max(y, kConeMinLength));
    const double s = std::sin(theta);
    const double pressure = 1.0 + consts.pressure_coefficient * s * s * v * v;
    return pressure * consts.cone_coefficient * turbulent_factor(re, ratio) * atm.density * v * v *
               v * enthalpy_ratio(h_aw, h_w, h_a) -
           radiated;
}

double equilibrium_wall_temperature(const std::function<double(double)>& net_flux,
                                    double ambient_temperature) {
    if (!(ambient_temperature > 0.0 && ambient_temperature < kBracketTop)) {
        throw DomainError("equilibrium_wall_temperature: ambient temperature out of bracket");
    }
    double lo = ambient_temperature;
    if (net_flux(lo) <= 0.0) return lo;
    double hi = kBracketTop;
    if (net_flux(hi) > 0.0) {
        throw DomainError("equilibrium_wall_temperature: net flux still positive at 4000 K");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = net_flux(mid);
        if (std::abs(f) < kResidualTolerance) return mid;
        if (f > 0.0) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-9) break;
    }
    return 0.5 * (lo + hi);
}

void ThermalStation::validate(double nose_length) const {
    if (!(emissivity > 0.0 && emissivity <= 1.0)) {
        throw ValidationError("thermal station: emissivity must lie in (0, 1]");
    }
    switch (kind) {
        case StationKind::stagnation:
            if (!(nose_radius > 0.0)) throw ValidationError("thermal station: nose radius must be positive");
            break;
        case StationKind::cone:
            if (!(y >= 0.0 && y <= nose_length)) {
                throw ValidationError("thermal station: cone Y must lie in [0, nose length]");
            }
            break;
        case StationKind::cylinder_base:
            if (!(length > 0.0)) throw ValidationError("thermal station: length must be positive");
            break;
    }
}

std::string ThermalStation::label() const {
    switch (kind) {
        case StationKind::stagnation: return "T_stag";
        case StationKind::cylinder_base: return "T_cyl_base";
        case StationKind::cone: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "T_cone_Y%.2f", y);
            return buf;
        }
    }
    return "T";
}

ThermalStation stagnation_station(double emissivity, double nose_radius) {
    ThermalStation s;
    s.kind = StationKind::stagnation;
    s.emissivity = emissivity;
    s.nose_radius = nose_radius;
    return s;
}

ThermalStation cone_station(double y, double emissivity) {
    ThermalStation s;
    s.kind = StationKind::cone;
    s.emissivity = emissivity;
    s.y = y;
    return s;
}

ThermalStation cylinder_station(double length) {
    ThermalStation s;
    s.kind = StationKind::cylinder_base;
    s.emissivity = 1.0;
    s.length = length;
    return s;
}

HeatSinkResult heat_sink_march(const flight::TrajectorySeries& series, double areal_density,
                               double wall_cp, double initial_temperature, double x,
                               const ThermalConstants& consts) {
    if (!(areal_density > 0.0) || !(wall_cp > 0.0)) {
        throw DomainError("heat_sink_march: areal density and heat capacity must be positive");
    }
    HeatSinkResult out;
    double temperature = initial_temperature;
    for (const auto& rec : series.records) {
        const double t = rec.state.t;
        if (t >= series.burn_time - kTimeEps) break;
        const double dt = std::min(series.step, series.burn_time - t);
        const auto atm = atmosphere::sample(std::clamp(rec.state.y, 0.0, atmosphere::kCeiling));
        const double q = turbulent_flux_cylinder(atm, rec.state.speed(), x, temperature, consts);
        out.energy += q * dt;
        out.steps.push_back({t, temperature, q, out.energy});
        temperature += q * dt / (areal_density * wall_cp);
    }
    out.final_temperature = temperature;
    return out;
}

double ThermalSeries::max_temperature(std::size_t station) const {
    double best = 0.0;
    for (const auto& s : samples) best = std::max(best, s.temperatures.at(station));
    return best;
}

double ThermalSeries::peak_time(std::size_t station) const {
    double best = -1.0;
    double when = 0.0;
    for (const auto& s : samples) {
        if (s.temperatures.at(station) > best) {
            best = s.temperatures.at(station);
            when = s.t;
        }
    }
    return when;
}

std::vector<ThermalStation> default_stations() {
    return {stagnation_station(), cone_station(0.03), cone_station(0.10), cone_station(0.30),
            cylinder_station()};
}

ThermalSeries analyze(const flight::TrajectorySeries& series,
                      const std::vector<ThermalStation>& stations,
                      const ThermalConstants& consts, double nose_length) {
    consts.validate();
    for (const auto& st : stations) st.validate(nose_length);

    ThermalSeries out;
    out.stations = stations;
    std::vector<double> sink(stations.size(), kInitialWallTemperature);

    for (const auto& rec : series.records) {
        const double t = rec.state.t;
        if (t > series.burn_time + kTimeEps) break;
        const bool powered = t < series.burn_time - kTimeEps;
        const double dt = powered ? std::min(series.step, series.burn_time - t) : 0.0;
        const auto atm = atmosphere::sample(std::clamp(rec.state.y, 0.0, atmosphere::kCeiling));
        const double v = rec.state.speed();

        ThermalSample sample{t, {}, 0.0};
        for (std::size_t i = 0; i < stations.size(); ++i) {
            const auto& st = stations[i];
            switch (st.kind) {
                case StationKind::stagnation:
                    sample.temperatures.push_back(equilibrium_wall_temperature(
                        [&](double tw) {
                            return stagnation_flux(atm, v, st.nose_radius, tw, st.emissivity, consts);
                        },
                        atm.temperature));
                    break;
                case StationKind::cone:
                    sample.temperatures.push_back(equilibrium_wall_temperature(
                        [&](double tw) {
                            return cone_flux(atm, v, st.y, tw, st.emissivity, consts, nose_length);
                        },
                        atm.temperature));
                    break;
                case StationKind::cylinder_base: {
                    sample.temperatures.push_back(sink[i]);
                    if (powered) {
                        const double q = turbulent_flux_cylinder(atm, v, st.length, sink[i], consts);
                        sample.cylinder_flux = q;
                        sink[i] += q * dt / (kCylinderArealDensity * kWallCp);
                    }
                    break;
                }
            }
        }
        out.samples.push_back(std::move(sample));
    }
    return out;
}

std::string to_csv(const ThermalSeries& series) {
    std::string out = "t";
    for (const auto& st : series.stations) out += "," + st.label();
    out += ",q_cyl\n";
    char buf[64];
    for (const auto& s : series.samples) {
        std::snprintf(buf, sizeof buf, "%.6g", s.t);
        out += buf;
        for (double temp : s.temperatures) {
            std::snprintf(buf, sizeof buf, ",%.6g", temp);
            out += buf;
        }
        std::snprintf(buf, sizeof buf, ",%.6g\n", s.cylinder_flux);
        out += buf;
    }
    return out;
}

}  // namespace dlsrr::thermal
