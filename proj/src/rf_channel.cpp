#include "fsotrade/rf_channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace fsotrade::rf {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::domain_error(std::string(what) + " must be finite and > 0");
    }
}

// log(1+u) - u/(1+u), accurate for small u.
double log1p_minus_ratio(double u) {
    if (u < 1e-4) return u * u * (0.5 - u * (2.0 / 3.0 - 0.75 * u));
    return std::log1p(u) - u / (1.0 + u);
}

}  // namespace

void RfLinkParams::validate() const {
    require_positive(wavelength_m, "RfLinkParams.wavelength_m");
    require_positive(gain_tx, "RfLinkParams.gain_tx");
    require_positive(gain_rx, "RfLinkParams.gain_rx");
    require_positive(reference_distance_m, "RfLinkParams.reference_distance_m");
    require_positive(noise_psd_w_per_mhz, "RfLinkParams.noise_psd_w_per_mhz");
    require_positive(source_power_w, "RfLinkParams.source_power_w");
    require_positive(relay_power_w, "RfLinkParams.relay_power_w");
    if (!(path_loss_exponent >= 2.0) || !std::isfinite(path_loss_exponent)) {
        throw std::domain_error("RfLinkParams.path_loss_exponent must be >= 2");
    }
}

void DualHopLink::validate() const {
    require_positive(v_mhz, "DualHopLink.v_mhz");
    require_positive(r, "DualHopLink.r");
    require_positive(bandwidth_mhz, "DualHopLink.bandwidth_mhz");
}

double DualHopLink::capacity_ceiling() const { return v_mhz / kLn2; }

std::string_view to_string(FadingKind kind) {
    switch (kind) {
        case FadingKind::DeterministicUnit: return "unit";
        case FadingKind::Rayleigh: return "rayleigh";
    }
    return "unknown";
}

FadingKind parse_fading_kind(std::string_view text) {
    if (text == "unit") return FadingKind::DeterministicUnit;
    if (text == "rayleigh") return FadingKind::Rayleigh;
    throw std::invalid_argument("unknown fading model '" + std::string(text) +
                                "' (expected unit or rayleigh)");
}

double path_gain(const RfLinkParams& params, double distance_m) {
    if (!(distance_m >= params.reference_distance_m)) {
        throw std::domain_error("RF hop distance " + std::to_string(distance_m) +
                                " m is inside the far-field reference distance");
    }
    const double free_space = std::sqrt(params.gain_tx * params.gain_rx) * params.wavelength_m /
                              (4.0 * std::numbers::pi * params.reference_distance_m);
    return free_space * free_space *
           std::pow(params.reference_distance_m / distance_m, params.path_loss_exponent);
}

RfHopState make_hop(const RfLinkParams& params, double distance_m, double fading_power) {
    if (!(fading_power >= 0.0)) throw std::domain_error("fading power must be >= 0");
    return {distance_m, path_gain(params, distance_m), fading_power};
}

double second_hop_efficiency(const RfLinkParams& params, double gain, double fading_power,
                             double bandwidth_mhz) {
    require_positive(bandwidth_mhz, "bandwidth");
    const double snr =
        gain * fading_power * params.relay_power_w / (params.noise_psd_w_per_mhz * bandwidth_mhz);
    return std::log1p(snr) / kLn2;
}

double first_hop_efficiency(double v_mhz, double b_mhz) {
    require_positive(b_mhz, "leased bandwidth b");
    require_positive(v_mhz, "first-hop SNR product v");
    return std::log1p(v_mhz / b_mhz) / kLn2;
}

double first_hop_bandwidth_for(double v_mhz, double efficiency) {
    require_positive(efficiency, "spectral efficiency");
    return v_mhz / std::expm1(efficiency * kLn2);
}

double optimal_time_share(double v_mhz, double r, double b_mhz) {
    const double y = first_hop_efficiency(v_mhz, b_mhz);
    return r / (y + r);
}

std::pair<double, double> hop_capacities(const DualHopLink& link, double b_mhz, double q) {
    const double y = first_hop_efficiency(link.v_mhz, b_mhz);
    return {q * b_mhz * y, (1.0 - q) * b_mhz * link.r};
}

double dual_hop_capacity(const DualHopLink& link, double b_mhz) {
    const double y = first_hop_efficiency(link.v_mhz, b_mhz);
    return b_mhz * link.r * y / (y + link.r);
}

double relay_capacity(const DualHopLink& link, double b_mhz) {
    if (!(b_mhz > 0.0 && b_mhz <= link.bandwidth_mhz)) {
        throw std::domain_error("leased bandwidth must lie in (0, W]");
    }
    return dual_hop_capacity(link, b_mhz);
}

double capacity_derivative(const DualHopLink& link, double b_mhz) {
    const double u = link.v_mhz / b_mhz;
    const double y = first_hop_efficiency(link.v_mhz, b_mhz);
    const double r = link.r;
    // r y^2 + r^2 y - (r^2 / ln 2)(1 - 2^-y), with 1 - 2^-y = u / (1 + u).
    const double numer = r * y * y + r * r * log1p_minus_ratio(u) / kLn2;
    return numer / ((y + r) * (y + r));
}

double sample_fading(const FadingModel& model, Rng& rng) {
    if (model.kind == FadingKind::DeterministicUnit) return 1.0;
    std::exponential_distribution<double> power(1.0);
    return power(rng);
}

DualHopLink make_dual_hop(const RfLinkParams& params, const RfHopState& first,
                          const RfHopState& second, double bandwidth_mhz) {
    const double v = first.gain * first.fading_power * params.source_power_w /
                     params.noise_psd_w_per_mhz;
    const double r = second_hop_efficiency(params, second.gain, second.fading_power, bandwidth_mhz);
    return {v, r, bandwidth_mhz};
}

}  // namespace fsotrade::rf
