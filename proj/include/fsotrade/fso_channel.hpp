#pragma once

#include <optional>

#include "fsotrade/rng.hpp"

namespace fsotrade::fso {

/// Physical constants of the optical source-destination link.
struct FsoLinkParams {
    double aperture_diameter_m = 0.05;
    double divergence_rad = 3.5e-3;
    double distance_m = 1000.0;
    double wavelength_m = 1550e-9;
    double responsivity = 0.5;
    double noise_variance_a2 = 1e-14;
    double power_w = 20e-3;
    double bandwidth_mhz = 1000.0;
    double cn2 = 5e-14;  // refraction structure parameter, m^(-2/3)

    /// Throws std::domain_error naming the first offending field.
    void validate() const;
};

/// Gamma-Gamma shape parameters (large- and small-scale eddies).
struct TurbulenceParams {
    double alpha;
    double beta;

    /// Normalized variance of the unit-mean fading, (1+1/a)(1+1/b) - 1.
    double scintillation_index() const;
};

/// Attenuation coefficient kappa in 1/km (natural-log units).
struct WeatherState {
    double kappa_per_km = 0.0;
    std::optional<double> visibility_km;

    static WeatherState from_visibility(double visibility_km, double wavelength_m);
    static WeatherState from_db_per_km(double db_per_km);
    double kappa_db_per_km() const;
};

/// Kim visibility model. Piecewise particle-size exponent: 1.6 above 50 km,
/// 1.3 on [6, 50] km, 0.585 V^(1/3) below 6 km.
double attenuation_coefficient(double visibility_km, double wavelength_m);

/// Geometric (beam-divergence) loss times Beer-Lambert weather loss.
double average_gain(const FsoLinkParams& params, double kappa_per_km);

/// Throws NumericError when the parameters drive alpha or beta out of range.
TurbulenceParams turbulence_params(const FsoLinkParams& params);

/// Gamma-Gamma density of the unit-mean intensity fading at h >= 0.
double gamma_gamma_pdf(const TurbulenceParams& tp, double h);

/// One draw h = X * Y, X ~ Gamma(alpha, 1/alpha), Y ~ Gamma(beta, 1/beta).
double sample_turbulence(const TurbulenceParams& tp, Rng& rng);

/// IM/DD achievable rate in Mbps for channel gain g_o and fading h_o. The
/// average gain multiplies the received signal, so it enters the SNR squared
/// alongside h_o.
double instantaneous_capacity(const FsoLinkParams& params, double gain, double h);

/// E[C_o] over Gamma-Gamma fading in Mbps, by adaptive Gauss-Kronrod
/// quadrature on [0, h_max] where the neglected tail mass is below 1e-9.
/// Throws NumericError if the requested 1e-6 relative accuracy is not met.
double average_capacity(const FsoLinkParams& params, double kappa_per_km);

}  // namespace fsotrade::fso
