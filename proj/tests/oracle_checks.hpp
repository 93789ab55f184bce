#pragma once

// Brute-force oracles over randomized trading scenarios, shared by the
// property tests and the acceptance runner.

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fsotrade/rf_channel.hpp"
#include "fsotrade/trading_game.hpp"
#include "test_support.hpp"

namespace fsotrade::testing {

struct RandomScenario {
    game::SourceState source;
    game::RelayProfile relay;
    std::vector<double> prices;
};

inline RandomScenario draw_scenario(std::uint64_t index) {
    std::mt19937_64 rng(0x5eed0000 + index);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto between = [&](double a, double b) { return a + (b - a) * u(rng); };

    rf::RfLinkParams p;
    p.path_loss_exponent = between(2.5, 4.0);
    p.source_power_w = between(0.05, 1.0);
    p.relay_power_w = between(0.05, 1.0);
    const double w = between(5.0, 40.0);
    const auto hop1 = rf::make_hop(p, between(100.0, 1200.0), between(0.05, 3.0));
    const auto hop2 = rf::make_hop(p, between(100.0, 1200.0), between(0.05, 3.0));

    RandomScenario s;
    s.relay.link = rf::make_dual_hop(p, hop1, hop2, w);
    s.relay.ues = static_cast<unsigned>(std::uniform_int_distribution<int>(0, 60)(rng));
    s.relay.rate_per_ue_mbps = between(1.0, 5.0);
    s.relay.c1 = between(0.5, 2.0);
    s.relay.c2 = between(0.1, 1.0);
    s.source.lambda = between(0.5, 2.0);
    // Keep the deficit below the capacity ceiling so the source is active.
    const double deficit = between(0.5, std::min(79.0, 0.95 * s.relay.link.capacity_ceiling()));
    s.source.c_bar_o_mbps = s.source.c_th_mbps - deficit;
    for (int i = 0; i < 3; ++i) s.prices.push_back(std::exp(between(std::log(0.05), std::log(10.0))));
    // One price inside the plateau window, which is often narrow.
    const game::DemandFunction d(s.source, s.relay.link);
    if (d.plateau_price() < d.cutoff_price()) s.prices.push_back(between(d.plateau_price(), d.cutoff_price()));
    return s;
}

inline constexpr int kOracleScenarios = 200;

struct OracleReport {
    int checked = 0;
    int failed = 0;
    std::string first_failure;
    // Branch coverage of the scenarios (demand: root/plateau/quit; supply: interior).
    int interior = 0;
    int plateau = 0;
    int quit = 0;

    void record(bool ok, const std::string& what) {
        ++checked;
        if (!ok && failed++ == 0) first_failure = what;
    }
};

/// Demand against the grid maximizer of max lambda C_R(b) - p b subject to
/// C_R(b) >= deficit, with staying out worth 0.
inline OracleReport check_demand_oracle(int scenarios = kOracleScenarios) {
    OracleReport rep;
    for (int i = 0; i < scenarios; ++i) {
        const auto s = draw_scenario(i);
        const auto& link = s.relay.link;
        const double deficit = s.source.rate_deficit();
        for (double p : s.prices) {
            const auto utility = [&](double b) {
                if (rf::dual_hop_capacity(link, b) < deficit) return -std::numeric_limits<double>::infinity();
                return s.source.lambda * rf::dual_hop_capacity(link, b) - p * b;
            };
            const auto [b_grid, h] = refined_argmax(utility, 1e-6, 1e9);
            const double best = utility(b_grid);
            if (std::abs(best) < 1e-7 * s.source.lambda * deficit) continue;  // indifferent at the cutoff
            const double expected = best > 0.0 ? b_grid : 0.0;
            const auto pt = game::demand(p, s.source, link);
            std::ostringstream what;
            what << "scenario " << i << " price " << p << ": demand " << pt.bandwidth_mhz << " vs grid " << expected;
            rep.record(std::abs(pt.bandwidth_mhz - expected) <= 2 * h + 1e-9 * expected, what.str());
            switch (pt.regime) {
                case game::DemandRegime::InteriorRoot: ++rep.interior; break;
                case game::DemandRegime::MinimumPlateau: ++rep.plateau; break;
                case game::DemandRegime::Quit: ++rep.quit; break;
            }
        }
    }
    return rep;
}

/// Supply against the grid maximizer of the relay utility on [0, W], where
/// lending must beat the no-trade baseline.
inline OracleReport check_supply_oracle(int scenarios = kOracleScenarios) {
    OracleReport rep;
    for (int i = 0; i < scenarios; ++i) {
        const auto s = draw_scenario(i);
        const double w = s.relay.link.bandwidth_mhz;
        for (double p : s.prices) {
            const auto utility = [&](double b) { return game::relay_utility(b, p, s.relay); };
            const auto coarse = linspace(0.0, w, 4001);
            const double b0 = grid_argmax(utility, coarse);
            const double step = coarse[1] - coarse[0];
            const auto fine = linspace(std::max(0.0, b0 - step), std::min(w, b0 + step), 4001);
            double b_grid = grid_argmax(utility, fine);
            if (!(utility(b_grid) > game::relay_no_trade_utility(s.relay))) b_grid = 0.0;
            const double h = fine[1] - fine[0];
            const double b = game::supply(p, s.relay);
            std::ostringstream what;
            what << "scenario " << i << " price " << p << ": supply " << b << " vs grid " << b_grid;
            rep.record(std::abs(b - b_grid) <= 2 * h + 1e-12 * w, what.str());
            if (b > 0.0 && b < w) ++rep.interior;
        }
    }
    return rep;
}

/// capacity_derivative against Richardson-extrapolated central differences,
/// 1e-6 relative.
inline OracleReport check_derivative_oracle(int scenarios = kOracleScenarios) {
    OracleReport rep;
    for (int i = 0; i < scenarios; ++i) {
        const auto s = draw_scenario(i);
        std::mt19937_64 rng(i);
        std::uniform_real_distribution<double> logb(std::log(1e-2), std::log(1e3));
        for (int k = 0; k < 3; ++k) {
            const double b = std::exp(logb(rng));
            const auto c = [&](double x) { return rf::dual_hop_capacity(s.relay.link, x); };
            const double h = 1e-3 * b;
            const double d1 = (c(b + h) - c(b - h)) / (2 * h);
            const double d2 = (c(b + h / 2) - c(b - h / 2)) / h;
            const double fd = (4 * d2 - d1) / 3;
            const double d = rf::capacity_derivative(s.relay.link, b);
            std::ostringstream what;
            what << "scenario " << i << " b " << b << ": derivative " << d << " vs " << fd;
            rep.record(std::abs(d - fd) <= 1e-6 * std::abs(fd), what.str());
        }
    }
    return rep;
}

/// optimal_time_share equalizes the two hop capacities to 1e-12 relative.
inline OracleReport check_time_share(int scenarios = kOracleScenarios) {
    OracleReport rep;
    for (int i = 0; i < scenarios; ++i) {
        const auto s = draw_scenario(i);
        const auto& link = s.relay.link;
        for (double b : {0.05, 1.0, link.bandwidth_mhz}) {
            const double q = rf::optimal_time_share(link.v_mhz, link.r, b);
            const auto [c1, c2] = rf::hop_capacities(link, b, q);
            std::ostringstream what;
            what << "scenario " << i << " b " << b << ": hops " << c1 << " vs " << c2;
            rep.record(std::abs(c1 - c2) <= 1e-12 * c1 && q > 0.0 && q < 1.0, what.str());
        }
    }
    return rep;
}

}  // namespace fsotrade::testing
