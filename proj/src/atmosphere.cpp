#include "dlsrr/atmosphere.hpp"

#include <array>
#include <cmath>
#include <string>

#include "dlsrr/error.hpp"

namespace dlsrr::atmosphere {
namespace {

constexpr double kEarthRadius = 6'356'766.0;    // m, effective radius of the 1976 model
constexpr double kG0 = 9.80665;
constexpr double kMolarMass = 0.0289644;        // kg/mol
constexpr double kUniversalGas = 8.31432;       // J/(mol K), value used by the 1976 standard
constexpr double kSeaLevelPressure = 101'325.0;

struct Layer {
    double base;   // geopotential m
    double temperature;
    double lapse;  // K/m
    double pressure;
};

double layer_pressure(const Layer& layer, double h) {
    const double dh = h - layer.base;
    constexpr double k = kG0 * kMolarMass / kUniversalGas;
    if (layer.lapse == 0.0) {
        return layer.pressure * std::exp(-k * dh / layer.temperature);
    }
    const double t = layer.temperature + layer.lapse * dh;
    return layer.pressure * std::pow(layer.temperature / t, k / layer.lapse);
}

std::array<Layer, 7> build_layers() {
    std::array<Layer, 7> layers{{
        {0.0, 288.15, -0.0065, kSeaLevelPressure},
        {11'000.0, 0.0, 0.0, 0.0},
        {20'000.0, 0.0, 0.001, 0.0},
        {32'000.0, 0.0, 0.0028, 0.0},
        {47'000.0, 0.0, 0.0, 0.0},
        {51'000.0, 0.0, -0.0028, 0.0},
        {71'000.0, 0.0, -0.002, 0.0},
    }};
    for (std::size_t i = 1; i < layers.size(); ++i) {
        const Layer& below = layers[i - 1];
        const double dh = layers[i].base - below.base;
        layers[i].temperature = below.temperature + below.lapse * dh;
        layers[i].pressure = layer_pressure(below, layers[i].base);
    }
    return layers;
}

const std::array<Layer, 7>& layers() {
    static const std::array<Layer, 7> table = build_layers();
    return table;
}

AtmosphereState layered(double geometric) {
    const double h = geopotential_altitude(geometric);
    const auto& table = layers();
    std::size_t i = table.size() - 1;
    while (i > 0 && h < table[i].base) --i;
    const Layer& layer = table[i];
    const double t = layer.temperature + layer.lapse * (h - layer.base);
    const double p = layer_pressure(layer, h);
    const double rho = p * kMolarMass / (kUniversalGas * t);
    return {geometric, t, p, rho, speed_of_sound(t)};
}

}  // namespace

double geopotential_altitude(double geometric) {
    return kEarthRadius * geometric / (kEarthRadius + geometric);
}

double speed_of_sound(double temperature) {
    if (!(temperature > 0.0)) {
        throw DomainError("speed_of_sound: temperature must be positive, got " +
                          std::to_string(temperature) + " K");
    }
    return std::sqrt(kGamma * kGasConstant * temperature);
}

AtmosphereState sample(double altitude) {
    if (!(altitude >= 0.0)) {
        throw DomainError("atmosphere: altitude " + std::to_string(altitude) +
                          " m is below the lower bound 0 m");
    }
    if (altitude > kCeiling) {
        throw DomainError("atmosphere: altitude " + std::to_string(altitude) +
                          " m is above the upper bound 140000 m");
    }
    if (altitude <= kLayeredTop) return layered(altitude);

    static const AtmosphereState top = layered(kLayeredTop);
    const double decay = std::exp(-(altitude - kLayeredTop) / kUpperScaleHeight);
    return {altitude, top.temperature, top.pressure * decay, top.density * decay,
            top.speed_of_sound};
}

}  // namespace dlsrr::atmosphere
