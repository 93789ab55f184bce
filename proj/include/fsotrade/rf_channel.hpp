#pragma once

#include <string_view>
#include <utility>

#include "fsotrade/rng.hpp"

namespace fsotrade::rf {

/// RF constants shared by every relay. Gains are linear and the noise PSD is
/// in W/MHz; the scenario loader converts from dBi and dBm/MHz.
struct RfLinkParams {
    double wavelength_m = 0.0857;
    double gain_tx = 10.0;
    double gain_rx = 10.0;
    double reference_distance_m = 80.0;
    double path_loss_exponent = 3.5;
    double noise_psd_w_per_mhz = 1e-3 * 3.981071705534973e-12;  // -114 dBm/MHz
    double source_power_w = 0.2;
    double relay_power_w = 0.2;

    void validate() const;
};

/// One hop: distance, mean power gain and fading power |h|^2.
struct RfHopState {
    double distance_m;
    double gain;
    double fading_power;
};

/// Reduced dual-hop description used by the trading game.
///   v: first-hop SNR-bandwidth product in MHz, so y(b) = log2(1 + v/b)
///   r: second-hop spectral efficiency in bit/s/Hz
///   bandwidth_mhz: relay licensed bandwidth W
struct DualHopLink {
    double v_mhz;
    double r;
    double bandwidth_mhz;

    void validate() const;
    /// Saturation capacity v / ln 2 in Mbps, approached as b grows.
    double capacity_ceiling() const;
};

enum class FadingKind { DeterministicUnit, Rayleigh };

struct FadingModel {
    FadingKind kind = FadingKind::Rayleigh;
};

std::string_view to_string(FadingKind kind);
/// Accepts "unit" and "rayleigh"; throws std::invalid_argument otherwise.
FadingKind parse_fading_kind(std::string_view text);

/// Far-field path gain. Throws std::domain_error for L < L_ref.
double path_gain(const RfLinkParams& params, double distance_m);

RfHopState make_hop(const RfLinkParams& params, double distance_m, double fading_power);

double second_hop_efficiency(const RfLinkParams& params, double gain, double fading_power,
                             double bandwidth_mhz);

/// y(b) = log2(1 + v/b). Throws std::domain_error unless b > 0 and v > 0.
double first_hop_efficiency(double v_mhz, double b_mhz);

/// Inverse of y in b: the bandwidth at which the first hop reaches `efficiency`.
double first_hop_bandwidth_for(double v_mhz, double efficiency);

/// Time share q* = r / (y(b) + r) equalizing the two hop capacities.
double optimal_time_share(double v_mhz, double r, double b_mhz);

/// The two terms of the decode-and-forward min for time share q:
/// {q * b * y(b), (1 - q) * b * r}, in Mbps.
std::pair<double, double> hop_capacities(const DualHopLink& link, double b_mhz, double q);

/// b r y(b) / (y(b) + r) for any b > 0, in Mbps. The demand side evaluates
/// this beyond the relay's licensed bandwidth.
double dual_hop_capacity(const DualHopLink& link, double b_mhz);

/// dual_hop_capacity restricted to 0 < b <= W; throws std::domain_error outside.
double relay_capacity(const DualHopLink& link, double b_mhz);

/// d/db of dual_hop_capacity: positive, decreasing, r at 0+ and 0 at infinity.
double capacity_derivative(const DualHopLink& link, double b_mhz);

/// |h|^2: 1 for DeterministicUnit, unit-mean exponential for Rayleigh.
double sample_fading(const FadingModel& model, Rng& rng);

DualHopLink make_dual_hop(const RfLinkParams& params, const RfHopState& first,
                          const RfHopState& second, double bandwidth_mhz);

}  // namespace fsotrade::rf
