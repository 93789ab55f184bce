#include "fsotrade/trading_game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fsotrade/errors.hpp"
#include "fsotrade/root_finding.hpp"

namespace fsotrade::game {

namespace {

constexpr BisectionOptions kBandwidthSolve{.rel_tol = 1e-13, .abs_tol = 0.0, .max_iter = 200};
constexpr BisectionOptions kPriceSolve{.rel_tol = 1e-14, .abs_tol = 0.0, .max_iter = 200};

// Relative mismatch between demand and supply tolerated at the clearing price.
constexpr double kClearingTolerance = 1e-6;

}  // namespace

void RelayProfile::validate() const {
    link.validate();
    if (!(rate_per_ue_mbps > 0.0)) throw std::domain_error("RelayProfile.rate_per_ue_mbps must be > 0");
    if (!(c1 > 0.0)) throw std::domain_error("RelayProfile.c1 must be > 0");
    if (!(c2 > 0.0)) throw std::domain_error("RelayProfile.c2 must be > 0");
}

std::string_view to_string(DemandRegime regime) {
    switch (regime) {
        case DemandRegime::InteriorRoot: return "interior-root";
        case DemandRegime::MinimumPlateau: return "minimum-plateau";
        case DemandRegime::Quit: return "quit";
    }
    return "unknown";
}

std::optional<double> min_bandwidth(double deficit_mbps, const rf::DualHopLink& link) {
    if (!(deficit_mbps > 0.0)) {
        throw std::domain_error("rate deficit must be > 0 for trading to be triggered");
    }
    if (deficit_mbps >= link.capacity_ceiling()) return std::nullopt;

    const auto covers = [&](double b) { return rf::dual_hop_capacity(link, b) >= deficit_mbps; };
    const auto hi = expand_upper(covers, 1.0);
    if (!hi) return std::nullopt;
    // Capacity vanishes as b -> 0+, so 0 is a valid lower end; bisect never
    // evaluates the endpoints.
    const auto shortfall = [&](double b) { return deficit_mbps - rf::dual_hop_capacity(link, b); };
    return bisect(shortfall, 0.0, *hi, kBandwidthSolve).mid();
}

DemandFunction::DemandFunction(const SourceState& source, const rf::DualHopLink& link)
    : source_(source), link_(link) {
    if (!(source.lambda > 0.0)) throw std::domain_error("SourceState.lambda must be > 0");
    if (!(source.c_th_mbps > 0.0)) throw std::domain_error("SourceState.c_th_mbps must be > 0");
    if (!source.triggered()) return;
    b_min_ = min_bandwidth(source.rate_deficit(), link);
    if (!b_min_) return;
    const double y = rf::first_hop_efficiency(link.v_mhz, *b_min_);
    plateau_price_ = source.lambda * rf::capacity_derivative(link, *b_min_);
    cutoff_price_ = source.lambda * link.r * y / (y + link.r);
}

DemandCurvePoint DemandFunction::operator()(double price) const {
    if (!(price > 0.0)) throw std::domain_error("price must be > 0");
    if (!b_min_ || price >= cutoff_price_) return {price, 0.0, DemandRegime::Quit};
    if (price >= plateau_price_) return {price, *b_min_, DemandRegime::MinimumPlateau};

    // Interior branch: T(b) = p / lambda with T strictly decreasing on (b_min, inf).
    const double target = price / source_.lambda;
    const auto below = [&](double b) { return rf::capacity_derivative(link_, b) <= target; };
    const auto hi = expand_upper(below, 2.0 * *b_min_);
    if (!hi) throw NumericError("demand root bracket exceeded for price " + std::to_string(price));
    const auto excess = [&](double b) { return rf::capacity_derivative(link_, b) - target; };
    const double b = bisect(excess, *b_min_, *hi, kBandwidthSolve).mid();
    return {price, b, DemandRegime::InteriorRoot};
}

DemandCurvePoint demand(double price, const SourceState& source, const rf::DualHopLink& link) {
    return DemandFunction(source, link)(price);
}

double source_utility(double b_mhz, double price, const SourceState& source,
                      const rf::DualHopLink& link) {
    if (!(b_mhz >= 0.0)) throw std::domain_error("bandwidth must be >= 0");
    if (b_mhz == 0.0) return 0.0;
    return source.lambda * rf::dual_hop_capacity(link, b_mhz) - b_mhz * price;
}

double supply_floor_price(const RelayProfile& relay) {
    if (relay.ues == 0) return 0.0;
    const double m = relay.ues;
    const double r = relay.link.r;
    return std::max(2.0 * relay.c2 * r * (relay.rate_per_ue_mbps - r * relay.link.bandwidth_mhz / m), 0.0);
}

double supply_saturation_price(const RelayProfile& relay) {
    if (relay.ues == 0) return 0.0;
    return 2.0 * relay.c2 * relay.link.r * relay.rate_per_ue_mbps;
}

double supply(double price, const RelayProfile& relay) {
    if (!(price > 0.0)) throw std::domain_error("price must be > 0");
    const double w = relay.link.bandwidth_mhz;
    if (relay.ues == 0) return w;
    if (price >= supply_saturation_price(relay)) return w;
    if (price <= supply_floor_price(relay)) return 0.0;
    const double m = relay.ues;
    const double r = relay.link.r;
    const double b = w - m * relay.rate_per_ue_mbps / r + m * price / (2.0 * relay.c2 * r * r);
    return std::clamp(b, 0.0, w);
}

double relay_utility(double b_mhz, double price, const RelayProfile& relay) {
    const double w = relay.link.bandwidth_mhz;
    if (!(b_mhz >= 0.0 && b_mhz <= w)) throw std::domain_error("lent bandwidth must lie in [0, W]");
    if (relay.ues == 0) return b_mhz * price;
    const double m = relay.ues;
    const double gap = relay.rate_per_ue_mbps - (w - b_mhz) * relay.link.r / m;
    return b_mhz * price + relay.c1 * m - relay.c2 * m * gap * gap;
}

double relay_no_trade_utility(const RelayProfile& relay) {
    if (relay.ues == 0) return 0.0;
    const double m = relay.ues;
    const double gap =
        std::max(relay.rate_per_ue_mbps - relay.link.bandwidth_mhz * relay.link.r / m, 0.0);
    return relay.c1 * m - relay.c2 * m * gap * gap;
}

std::optional<Quote> market_equilibrium(const SourceState& source, const RelayProfile& relay) {
    if (!source.triggered()) throw std::domain_error("market equilibrium requires C_bar_o < C_th");
    const DemandFunction demand_at(source, relay.link);
    if (!demand_at.active()) return std::nullopt;

    const double cutoff = demand_at.cutoff_price();
    const double lo = std::max(supply_floor_price(relay), 1e-12 * cutoff);
    if (lo >= cutoff) return std::nullopt;

    // Demand is non-increasing and supply non-decreasing, so the excess
    // demand changes sign at most once on (lo, cutoff]; demand is zero at the
    // cutoff itself.
    const auto excess = [&](double p) { return demand_at(p).bandwidth_mhz - supply(p, relay); };
    if (excess(lo) <= 0.0) return std::nullopt;
    const double price = bisect(excess, lo, cutoff, kPriceSolve).lo;

    const double b = demand_at(price).bandwidth_mhz;
    const double w = relay.link.bandwidth_mhz;
    // A sign change only across demand's drop at the cutoff is not a crossing.
    if (std::abs(b - supply(price, relay)) > kClearingTolerance * w) return std::nullopt;

    const double lent = std::min(b, w);
    return Quote{relay.id, price, lent, source_utility(lent, price, source, relay.link),
                 relay_utility(lent, price, relay)};
}

std::optional<Quote> select_relay(const SourceState& source, std::span<const RelayProfile> relays) {
    if (relays.empty()) throw std::domain_error("relay selection needs at least one relay");
    if (!source.triggered()) throw std::domain_error("relay selection requires C_bar_o < C_th");
    std::optional<Quote> best;
    for (const auto& relay : relays) {
        const auto quote = market_equilibrium(source, relay);
        if (!quote) continue;
        if (!best || quote->source_utility > best->source_utility ||
            (quote->source_utility == best->source_utility && quote->relay_id < best->relay_id)) {
            best = quote;
        }
    }
    return best;
}

}  // namespace fsotrade::game
