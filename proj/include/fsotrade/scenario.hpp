#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fsotrade/fso_channel.hpp"
#include "fsotrade/market_sim.hpp"
#include "fsotrade/rf_channel.hpp"

namespace fsotrade {

/// RF settings in the units scenario files use (dBi, dBm/MHz). Kept apart
/// from rf::RfLinkParams so a dumped scenario reloads bit-for-bit.
struct RfSettings {
    double wavelength_m = 0.0857;
    double gain_tx_dbi = 10.0;
    double gain_rx_dbi = 10.0;
    double reference_distance_m = 80.0;
    double path_loss_exponent = 3.5;
    double noise_psd_dbm_per_mhz = -114.0;
    double source_power_w = 0.2;
    double relay_power_w = 0.2;
    rf::FadingKind fading = rf::FadingKind::Rayleigh;

    rf::RfLinkParams params() const;
};

struct GameSettings {
    double lambda = 1.0;
    double c_th_mbps = 80.0;
    double bandwidth_mhz = 20.0;
    double rate_per_ue_mbps = 3.0;
    double c1 = 1.0;
    double c2 = 0.5;
};

struct SimSettings {
    std::size_t relays = 1;
    std::vector<double> hop1_distances_m{600.0};  // one value, or one per relay
    std::vector<double> hop2_distances_m{600.0};
    double upsilon_m = 5.0;
    std::size_t samples_per_point = 3000;
    std::uint64_t seed = 1;
    double t_c_s = 3600.0;
    double t_f_s = 3.0;
    double t_t_s = 300.0;
    std::size_t threads = 0;
};

/// Inputs of the individual CLI experiments.
struct ExperimentSettings {
    double c_bar_o_mbps = 30.0;
    unsigned ues = 25;
    double hop1_fading_power = 1.0;
    double hop2_fading_power = 1.0;
    double price_min = 0.1;
    double price_max = 7.0;
    std::size_t price_points = 691;
    double kappa_min_db_per_km = 0.0;
    double kappa_max_db_per_km = 40.0;
    double kappa_step_db_per_km = 1.0;
    double asymptote_kappa_db_per_km = 60.0;
    std::size_t max_relays = 10;
    std::vector<std::size_t> profit_relay_counts{1, 5};
    std::string visibility_file;
    std::size_t fixture_hours = 1000;
    std::size_t fixture_fog_hours = 6;
};

/// A complete scenario. Defaults reproduce the baseline parameter table.
struct Scenario {
    fso::FsoLinkParams fso;
    RfSettings rf;
    GameSettings game;
    SimSettings sim;
    ExperimentSettings experiment;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
    sim::ScenarioConfig sim_config() const;
    /// Link of the first relay with the experiment's fixed fading powers.
    rf::DualHopLink experiment_link() const;
};

/// Reads the INI-style scenario format: `[section]` headers and
/// `key = value` lines, `;` or `#` comments. Unknown sections or keys are
/// rejected. Missing keys keep their defaults.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& path);

/// Applies one `section.key=value` override.
void apply_override(Scenario& scenario, std::string_view assignment);

/// Writes every key, including defaults, so parse_scenario(dump) == scenario.
void dump_scenario(std::ostream& out, const Scenario& scenario);

/// Fully qualified `section.key` names in dump order.
std::vector<std::string> scenario_keys();

/// Shortest round-trip decimal representation.
std::string format_number(double value);

}  // namespace fsotrade
