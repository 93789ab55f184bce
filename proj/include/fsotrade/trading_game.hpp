#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "fsotrade/rf_channel.hpp"

namespace fsotrade::game {

/// The buyer. Trading is only triggered while c_bar_o_mbps < c_th_mbps.
struct SourceState {
    double c_bar_o_mbps;
    double c_th_mbps = 80.0;
    double lambda = 1.0;  // revenue per Mbps

    bool triggered() const { return c_bar_o_mbps < c_th_mbps; }
    double rate_deficit() const { return c_th_mbps - c_bar_o_mbps; }
};

/// A seller: its dual-hop link towards the destination and its own UE load.
struct RelayProfile {
    std::size_t id = 0;
    rf::DualHopLink link;
    unsigned ues = 0;               // M
    double rate_per_ue_mbps = 3.0;  // R_ur
    double c1 = 1.0;
    double c2 = 0.5;

    void validate() const;
};

enum class DemandRegime { InteriorRoot, MinimumPlateau, Quit };

std::string_view to_string(DemandRegime regime);

struct DemandCurvePoint {
    double price;
    double bandwidth_mhz;
    DemandRegime regime;
};

/// One relay's equilibrium offer.
struct Quote {
    std::size_t relay_id;
    double price;
    double bandwidth_mhz;
    double source_utility;
    double relay_utility;
};

/// Smallest b whose dual-hop capacity covers `deficit_mbps`; nullopt when the
/// deficit is at or above the capacity ceiling v / ln 2 (the source quits).
/// Throws std::domain_error for deficit <= 0.
std::optional<double> min_bandwidth(double deficit_mbps, const rf::DualHopLink& link);

/// The source's demand function for one relay link. The minimum bandwidth is
/// solved once at construction; evaluating a price is then one bisection.
class DemandFunction {
public:
    DemandFunction(const SourceState& source, const rf::DualHopLink& link);

    DemandCurvePoint operator()(double price) const;

    /// False when the source quits at every price.
    bool active() const { return b_min_.has_value(); }
    std::optional<double> b_min() const { return b_min_; }
    /// lambda * T(b_min): start of the minimum-bandwidth plateau.
    double plateau_price() const { return plateau_price_; }
    /// lambda * r y(b_min) / (y(b_min) + r): demand is zero at and above this.
    double cutoff_price() const { return cutoff_price_; }

private:
    SourceState source_;
    rf::DualHopLink link_;
    std::optional<double> b_min_;
    double plateau_price_ = 0.0;
    double cutoff_price_ = 0.0;
};

DemandCurvePoint demand(double price, const SourceState& source, const rf::DualHopLink& link);

/// lambda * C_R(b) - b p; zero at b = 0.
double source_utility(double b_mhz, double price, const SourceState& source,
                      const rf::DualHopLink& link);

/// Lower edge p_L of the relay's open supply branch.
double supply_floor_price(const RelayProfile& relay);
/// Price from which the relay lends its whole band W.
double supply_saturation_price(const RelayProfile& relay);

/// The relay's supply function. A relay with no UEs lends W at any price.
double supply(double price, const RelayProfile& relay);

/// b p + c1 M - c2 M (R_ur - (W - b) r / M)^2; throws for b outside [0, W].
double relay_utility(double b_mhz, double price, const RelayProfile& relay);
double relay_no_trade_utility(const RelayProfile& relay);

/// Market-clearing price where demand equals supply, or nullopt when the two
/// curves do not cross (including when demand jumps past supply at its
/// cutoff). Throws std::domain_error if trading is not triggered.
std::optional<Quote> market_equilibrium(const SourceState& source, const RelayProfile& relay);

/// Equilibrium quote with the highest source utility, ties to the lowest id.
/// Throws std::domain_error for an empty relay set or an untriggered source.
std::optional<Quote> select_relay(const SourceState& source, std::span<const RelayProfile> relays);

}  // namespace fsotrade::game
