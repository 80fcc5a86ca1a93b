#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlsrr/atmosphere.hpp"
#include "dlsrr/flight.hpp"

namespace dlsrr::thermal {

inline constexpr double kStefanBoltzmann = 5.67e-8;   // W/(m^2 K^4)
inline constexpr double kAirCp = 1005.0;              // J/(kg K)
inline constexpr double kWallCp = 912.5;              // J/(kg K), aluminium: 73 J/g over 80 K
inline constexpr double kCylinderArealDensity = 13.5; // kg/m^2, 5 mm aluminium
inline constexpr double kInitialWallTemperature = 293.15;
inline constexpr double kConeMinLength = 0.03;        // m, Reynolds length floor near the tip
inline constexpr double kBracketTop = 4000.0;         // K
inline constexpr double kResidualTolerance = 1.0;     // W/m^2

/// Air enthalpy model. Implementations must be strictly increasing in T.
class AirEnthalpy {
public:
    virtual ~AirEnthalpy() = default;
    virtual double enthalpy(double temperature) const = 0;   // J/kg
    virtual double temperature(double enthalpy) const = 0;   // K
};

/// Calorically perfect air, h = cp T.
class PerfectGasEnthalpy final : public AirEnthalpy {
public:
    explicit PerfectGasEnthalpy(double cp = kAirCp) : cp_(cp) {}
    double enthalpy(double temperature) const override { return cp_ * temperature; }
    double temperature(double enthalpy) const override { return enthalpy / cp_; }
    double cp() const { return cp_; }

private:
    double cp_;
};

/// Stagnation-point heating correlations.
enum class QkModel { klein, sutton, chapman, detra };

std::optional<QkModel> parse_qk_model(std::string_view name);
const char* to_string(QkModel model);

struct ThermalConstants {
    QkModel qk_model = QkModel::klein;
    double sigma = kStefanBoltzmann;
    double prandtl = 0.71;
    double gamma = 1.4;
    double rf_stagnation = 1.0;
    double rf_turbulent = 0.9;
    double mu_ref = 1.7e-5;   // kg/(m s)
    double t_ref = 240.0;     // K
    double mu_exponent = 0.7;
    double cylinder_coefficient = 0.68;
    double cone_coefficient = 0.88;
    double pressure_coefficient = 6e-6;   // s^2/m^2
    std::shared_ptr<const AirEnthalpy> air = std::make_shared<PerfectGasEnthalpy>();

    /// Q_K in SI units for the selected correlation at speed v (m/s).
    double stagnation_constant(double v) const;
    double enthalpy(double temperature) const { return air->enthalpy(temperature); }

    /// Throws ValidationError when a constant is non-positive or a recovery factor leaves (0, 1].
    void validate() const;
};

/// Default model, cp_air T.
double air_enthalpy(double temperature);

struct Recovery {
    double enthalpy;      // h_aw, J/kg
    double temperature;   // T_r, K
};

/// h_aw = h_a + r_f v^2 / 2 and its temperature under the constants' enthalpy model.
Recovery recovery_conditions(const atmosphere::AtmosphereState& atm, double v, double rf,
                             const ThermalConstants& consts = {});

/// T_a (1 + (gamma - 1)/2 r_f M^2).
double recovery_temperature_approx(double ambient_temperature, double mach, double rf,
                                   double gamma = 1.4);

/// Net laminar stagnation-point flux (convective minus re-radiated), W/m^2.
double stagnation_flux(const atmosphere::AtmosphereState& atm, double v, double nose_radius,
                       double wall_temperature, double emissivity,
                       const ThermalConstants& consts = {});

/// 70e6 rho v_kps x.
double reynolds(double density, double v, double x);

/// mu_ref (T / T_ref)^exponent.
double viscosity(double temperature, const ThermalConstants& consts = {});

/// 2.28 [ln Re - 1.7 ln(T*/T_a)]^-2.45 / (T*/T_a). DomainError when the bracket is not positive.
double skin_friction(double re, double t_star_ratio);

/// T* from h* = 0.22 h_aw + 0.50 h_w + 0.28 h_a.
double reference_temperature(double h_aw, double wall_temperature, double ambient_temperature,
                             const ThermalConstants& consts = {});

/// Turbulent convective flux into a heat-sink wall at distance x from the leading edge, W/m^2.
double turbulent_flux_cylinder(const atmosphere::AtmosphereState& atm, double v, double x,
                               double wall_temperature, const ThermalConstants& consts = {});

/// 0.3 (1 - Y / nose_length) rad for the ogive nose.
double cone_inclination(double y, double nose_length = 1.0);

/// Net turbulent flux at nose station Y, including the pressure rise and re-radiation, W/m^2.
double cone_flux(const atmosphere::AtmosphereState& atm, double v, double y,
                 double wall_temperature, double emissivity, const ThermalConstants& consts = {},
                 double nose_length = 1.0);

/// Root of a decreasing net-flux function on [T_a, 4000 K] by bisection.
/// Returns T_a when flux(T_a) <= 0; DomainError when flux(4000 K) > 0.
double equilibrium_wall_temperature(const std::function<double(double)>& net_flux,
                                    double ambient_temperature);

enum class StationKind { stagnation, cone, cylinder_base };

struct ThermalStation {
    StationKind kind = StationKind::stagnation;
    double emissivity = 0.6;
    double y = 0.0;             // m, cone stations
    double nose_radius = 0.02;  // m, stagnation
    double length = 1.0;        // m, cylinder characteristic length

    void validate(double nose_length = 1.0) const;
    std::string label() const;

    bool operator==(const ThermalStation&) const = default;
};

ThermalStation stagnation_station(double emissivity = 0.6, double nose_radius = 0.02);
ThermalStation cone_station(double y, double emissivity = 0.75);
ThermalStation cylinder_station(double length = 1.0);

struct HeatSinkStep {
    double t;
    double temperature;   // K, at the start of the step
    double flux;          // W/m^2 absorbed during the step
    double energy;        // J/m^2 absorbed up to the end of the step
};

struct HeatSinkResult {
    std::vector<HeatSinkStep> steps;
    double final_temperature = 0.0;   // K
    double energy = 0.0;              // J/m^2
};

/// Marches T += q dt / (m_A c_p) over the powered part of the series.
HeatSinkResult heat_sink_march(const flight::TrajectorySeries& series,
                               double areal_density = kCylinderArealDensity,
                               double wall_cp = kWallCp,
                               double initial_temperature = kInitialWallTemperature,
                               double x = 1.0, const ThermalConstants& consts = {});

struct ThermalSample {
    double t;
    std::vector<double> temperatures;   // K, one per station
    double cylinder_flux;               // W/m^2, zero after burnout
};

/// Wall temperatures over the powered part of an ascent.
struct ThermalSeries {
    std::vector<ThermalStation> stations;
    std::vector<ThermalSample> samples;

    double max_temperature(std::size_t station) const;
    double peak_time(std::size_t station) const;
};

/// Stagnation (e 0.6), cone stations at 0.03, 0.10 and 0.30 m (e 0.75) and the cylinder base.
std::vector<ThermalStation> default_stations();

/// Radiative stations are solved independently per record; cylinder stations march.
ThermalSeries analyze(const flight::TrajectorySeries& series,
                      const std::vector<ThermalStation>& stations,
                      const ThermalConstants& consts = {}, double nose_length = 1.0);

/// Header t then one column per station label, then q_cyl; 6 significant digits.
std::string to_csv(const ThermalSeries& series);

}  // namespace dlsrr::thermal
