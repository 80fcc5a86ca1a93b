#pragma once

namespace dlsrr::atmosphere {

inline constexpr double kGamma = 1.4;
inline constexpr double kGasConstant = 287.05;        // J/(kg K), specific, dry air
inline constexpr double kCeiling = 140'000.0;         // m
inline constexpr double kLayeredTop = 86'000.0;       // m, top of the layered model

/// Density scale height above 86 km. Least-squares fit of ln(rho/rho_86) to the
/// published 1976 densities at 86, 90, 95, ..., 120 km (line through the 86 km point).
inline constexpr double kUpperScaleHeight = 5735.2;   // m

struct AtmosphereState {
    double altitude;        // m, geometric
    double temperature;     // K
    double pressure;        // Pa
    double density;         // kg/m^3
    double speed_of_sound;  // m/s
};

/// US Standard Atmosphere 1976, geometric altitude in [0, 140 km].
/// Layered model up to 86 km; above it the density and pressure decay
/// exponentially with kUpperScaleHeight and temperature is held at the 86 km value.
/// Throws DomainError outside the domain.
AtmosphereState sample(double altitude);

/// sqrt(gamma R T). Throws DomainError for non-positive temperature.
double speed_of_sound(double temperature);

/// Geopotential altitude for a geometric altitude (both m).
double geopotential_altitude(double geometric);

}  // namespace dlsrr::atmosphere
