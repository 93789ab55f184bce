#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fsotrade/fso_channel.hpp"
#include "fsotrade/rf_channel.hpp"
#include "fsotrade/rng.hpp"
#include "fsotrade/trading_game.hpp"

namespace fsotrade::sim {

struct RelayGeometry {
    double hop1_distance_m = 600.0;  // source -> relay
    double hop2_distance_m = 600.0;  // relay -> destination
};

/// Everything the Monte Carlo engine needs. Relay count N is relays.size().
struct ScenarioConfig {
    fso::FsoLinkParams fso;
    rf::RfLinkParams rf;
    rf::FadingModel fading;
    std::vector<RelayGeometry> relays{RelayGeometry{}};
    double bandwidth_mhz = 20.0;  // W, identical for every relay
    double upsilon_m = 5.0;       // Poisson mean of UEs per relay
    double rate_per_ue_mbps = 3.0;
    double c1 = 1.0;
    double c2 = 0.5;
    double lambda = 1.0;
    double c_th_mbps = 80.0;
    std::size_t samples_per_point = 3000;
    std::uint64_t seed = 1;
    // Time scales in seconds. Scintillation is absorbed into C_bar_o.
    double t_c_s = 3600.0;
    double t_f_s = 3.0;
    double t_t_s = 300.0;
    /// Worker threads; 0 picks the hardware concurrency. Results do not
    /// depend on this value.
    std::size_t threads = 0;

    std::size_t relay_count() const { return relays.size(); }
    /// T_u = min(T_f, T_t): how long a leased band is used before re-trading.
    double t_u_s() const;
    /// Trading games per weather-coherence interval, floor(T_c / T_u).
    std::size_t games_per_interval() const;
    void validate() const;
};

/// Random state of one relay for one T_u epoch.
struct RelayDraw {
    double hop1_fading_power;
    double hop2_fading_power;
    unsigned ues;
};

struct EpochResult {
    double c_fso_mbps = 0.0;
    bool traded = false;
    std::optional<std::size_t> relay_id;
    std::optional<double> price;
    std::optional<double> bandwidth_mhz;
    double total_capacity_mbps = 0.0;
    double source_profit = 0.0;
    std::vector<double> relay_profits;  // gain over the no-trade baseline
};

struct AggregateStats {
    double kappa_db_per_km = 0.0;
    std::size_t relay_count = 0;
    double upsilon_m = 0.0;
    std::size_t samples = 0;
    double fso_capacity_mbps = 0.0;
    double mean_capacity_mbps = 0.0;
    double capacity_stderr_mbps = 0.0;
    double mean_source_profit = 0.0;
    double mean_total_relay_profit = 0.0;
    double trade_rate = 0.0;
    /// Fraction of epochs whose total capacity meets C_th.
    double availability = 0.0;
};

struct AvailabilityReport {
    std::size_t total_hours = 0;
    std::vector<std::size_t> outage_hours;  // indices into the series
    std::vector<double> p_available;        // one per outage hour
    double fso_only_availability = 0.0;
    double availability = 0.0;
};

RelayDraw draw_relay(const ScenarioConfig& cfg, Rng& rng);

/// Builds the relay profiles for one epoch from the geometry and draws.
std::vector<game::RelayProfile> relay_profiles(const ScenarioConfig& cfg,
                                               std::span<const RelayDraw> draws);

/// Outcome of one T_u game given the average FSO capacity and the relays'
/// random state. Deterministic.
EpochResult evaluate_epoch(const ScenarioConfig& cfg, double c_fso_mbps,
                           std::span<const RelayDraw> draws);

/// One epoch at attenuation kappa (1/km), drawing every relay from `rng`.
/// Nothing is drawn when the FSO link alone meets C_th.
EpochResult run_epoch(const ScenarioConfig& cfg, double kappa_per_km, Rng& rng);

/// Monte Carlo averages of samples_per_point epochs at each attenuation
/// (dB/km). Each epoch and relay uses its own stream derived from the seed
/// and the attenuation value, so a point's result does not depend on the
/// rest of the grid.
std::vector<AggregateStats> sweep_kappa(const ScenarioConfig& cfg,
                                        std::span<const double> kappa_db_grid);

/// Mean total capacity at a fixed high attenuation for each relay count in
/// `relay_counts`. The first relay geometry is replicated.
std::vector<AggregateStats> asymptotic_capacity(const ScenarioConfig& cfg,
                                                std::span<const std::size_t> relay_counts,
                                                double kappa_db_per_km = 60.0);

/// Fraction of hours meeting C_th: outage hours contribute their
/// availability probability, the rest count fully.
double combine_availability(std::size_t total_hours, std::span<const double> p_available);

using AvailabilityEstimator = std::function<double(std::size_t hour, double c_fso_mbps)>;

/// Availability over an hourly attenuation series (1/km). Hours with
/// C_bar_o < C_th are outages; `estimate` supplies each one's probability.
AvailabilityReport availability(const ScenarioConfig& cfg, std::span<const double> kappa_series,
                                 const AvailabilityEstimator& estimate);

/// As above, estimating each outage hour by games_per_interval() Monte Carlo
/// trading games.
AvailabilityReport availability(const ScenarioConfig& cfg, std::span<const double> kappa_series);

}  // namespace fsotrade::sim
