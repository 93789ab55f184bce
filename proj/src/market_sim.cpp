#include "fsotrade/market_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>

#include "fsotrade/units.hpp"

namespace fsotrade::sim {

namespace {

// Stream namespaces so sweep and availability draws never coincide.
constexpr std::uint64_t kSweepStreams = 1;
constexpr std::uint64_t kAvailabilityStreams = 2;

// Slack when checking a traded epoch against C_th.
constexpr double kRateSlack = 1e-6;

/// Neumaier compensated sum; order-dependent only through the fixed
/// sequential order in which it is fed.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) fn(i);
        });
    }
}

struct EpochSummary {
    double capacity;
    double source_profit;
    double relay_profit;
    bool traded;
    bool available;
};

EpochSummary summarize(const ScenarioConfig& cfg, const EpochResult& epoch) {
    CompensatedSum relay_total;
    for (double p : epoch.relay_profits) relay_total.add(p);
    return {epoch.total_capacity_mbps, epoch.source_profit, relay_total.value(), epoch.traded,
            epoch.total_capacity_mbps >= cfg.c_th_mbps - kRateSlack};
}

std::vector<RelayDraw> draw_from_streams(const ScenarioConfig& cfg, std::uint64_t tag,
                                         std::uint64_t a, std::uint64_t b) {
    std::vector<RelayDraw> draws;
    draws.reserve(cfg.relay_count());
    for (std::size_t i = 0; i < cfg.relay_count(); ++i) {
        Rng rng = derive_stream(cfg.seed, {tag, a, b, static_cast<std::uint64_t>(i)});
        draws.push_back(draw_relay(cfg, rng));
    }
    return draws;
}

AggregateStats sweep_point(const ScenarioConfig& cfg, double kappa_db) {
    AggregateStats stats;
    stats.kappa_db_per_km = kappa_db;
    stats.relay_count = cfg.relay_count();
    stats.upsilon_m = cfg.upsilon_m;
    stats.samples = cfg.samples_per_point;

    const double c_fso = fso::average_capacity(cfg.fso, units::kappa_from_db_per_km(kappa_db));
    stats.fso_capacity_mbps = c_fso;
    if (c_fso >= cfg.c_th_mbps) {
        // Trading is never triggered: every epoch is the FSO-only epoch.
        stats.mean_capacity_mbps = c_fso;
        stats.availability = 1.0;
        return stats;
    }

    const std::uint64_t point = std::bit_cast<std::uint64_t>(kappa_db);
    std::vector<EpochSummary> epochs(cfg.samples_per_point);
    parallel_for(epochs.size(), cfg.threads, [&](std::size_t e) {
        const auto draws = draw_from_streams(cfg, kSweepStreams, point, e);
        epochs[e] = summarize(cfg, evaluate_epoch(cfg, c_fso, draws));
    });

    CompensatedSum capacity, capacity_sq, source, relay;
    std::size_t traded = 0;
    std::size_t available = 0;
    for (const auto& e : epochs) {
        capacity.add(e.capacity);
        capacity_sq.add(e.capacity * e.capacity);
        source.add(e.source_profit);
        relay.add(e.relay_profit);
        traded += e.traded;
        available += e.available;
    }
    const double n = static_cast<double>(epochs.size());
    stats.mean_capacity_mbps = capacity.value() / n;
    if (epochs.size() > 1) {
        const double var = std::max(
            (capacity_sq.value() - n * stats.mean_capacity_mbps * stats.mean_capacity_mbps) / (n - 1.0),
            0.0);
        stats.capacity_stderr_mbps = std::sqrt(var / n);
    }
    stats.mean_source_profit = source.value() / n;
    stats.mean_total_relay_profit = relay.value() / n;
    stats.trade_rate = static_cast<double>(traded) / n;
    stats.availability = static_cast<double>(available) / n;
    return stats;
}

}  // namespace

double ScenarioConfig::t_u_s() const { return std::min(t_f_s, t_t_s); }

std::size_t ScenarioConfig::games_per_interval() const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(t_c_s / t_u_s())));
}

void ScenarioConfig::validate() const {
    fso.validate();
    rf.validate();
    if (relays.empty()) throw std::domain_error("scenario needs at least one relay");
    for (const auto& g : relays) {
        if (!(g.hop1_distance_m >= rf.reference_distance_m) ||
            !(g.hop2_distance_m >= rf.reference_distance_m)) {
            throw std::domain_error("relay hop distances must be >= the RF reference distance");
        }
    }
    if (!(bandwidth_mhz > 0.0)) throw std::domain_error("relay bandwidth must be > 0");
    if (!(upsilon_m >= 0.0) || !std::isfinite(upsilon_m)) {
        throw std::domain_error("upsilon_m must be finite and >= 0");
    }
    if (!(rate_per_ue_mbps > 0.0)) throw std::domain_error("rate_per_ue_mbps must be > 0");
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw std::domain_error("c1 and c2 must be > 0");
    if (!(lambda > 0.0)) throw std::domain_error("lambda must be > 0");
    if (!(c_th_mbps > 0.0)) throw std::domain_error("c_th_mbps must be > 0");
    if (samples_per_point < 1) throw std::domain_error("samples_per_point must be >= 1");
    if (!(t_c_s > 0.0) || !(t_f_s > 0.0) || !(t_t_s > 0.0)) {
        throw std::domain_error("time scales must be > 0");
    }
    if (t_u_s() > t_c_s) throw std::domain_error("T_u = min(T_f, T_t) must not exceed T_c");
}

RelayDraw draw_relay(const ScenarioConfig& cfg, Rng& rng) {
    RelayDraw d{};
    d.hop1_fading_power = rf::sample_fading(cfg.fading, rng);
    d.hop2_fading_power = rf::sample_fading(cfg.fading, rng);
    if (cfg.upsilon_m > 0.0) {
        std::poisson_distribution<unsigned> ues(cfg.upsilon_m);
        d.ues = ues(rng);
    }
    return d;
}

std::vector<game::RelayProfile> relay_profiles(const ScenarioConfig& cfg,
                                               std::span<const RelayDraw> draws) {
    if (draws.size() != cfg.relay_count()) {
        throw std::invalid_argument("one draw per relay is required");
    }
    std::vector<game::RelayProfile> relays;
    relays.reserve(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const auto& geometry = cfg.relays[i];
        const auto hop1 = rf::make_hop(cfg.rf, geometry.hop1_distance_m, draws[i].hop1_fading_power);
        const auto hop2 = rf::make_hop(cfg.rf, geometry.hop2_distance_m, draws[i].hop2_fading_power);
        game::RelayProfile relay;
        relay.id = i;
        relay.link = rf::make_dual_hop(cfg.rf, hop1, hop2, cfg.bandwidth_mhz);
        relay.ues = draws[i].ues;
        relay.rate_per_ue_mbps = cfg.rate_per_ue_mbps;
        relay.c1 = cfg.c1;
        relay.c2 = cfg.c2;
        relays.push_back(relay);
    }
    return relays;
}

EpochResult evaluate_epoch(const ScenarioConfig& cfg, double c_fso_mbps,
                           std::span<const RelayDraw> draws) {
    EpochResult out;
    out.c_fso_mbps = c_fso_mbps;
    out.total_capacity_mbps = c_fso_mbps;
    out.relay_profits.assign(cfg.relay_count(), 0.0);
    if (c_fso_mbps >= cfg.c_th_mbps) return out;

    auto relays = relay_profiles(cfg, draws);
    // A hop in a perfect null (zero fading power) cannot carry traffic.
    std::erase_if(relays, [](const game::RelayProfile& r) { return !(r.link.v_mhz > 0.0 && r.link.r > 0.0); });
    if (relays.empty()) return out;

    const game::SourceState source{c_fso_mbps, cfg.c_th_mbps, cfg.lambda};
    const auto quote = game::select_relay(source, relays);
    if (!quote) return out;

    const auto& chosen = *std::find_if(relays.begin(), relays.end(),
                                       [&](const auto& r) { return r.id == quote->relay_id; });
    out.traded = true;
    out.relay_id = quote->relay_id;
    out.price = quote->price;
    out.bandwidth_mhz = quote->bandwidth_mhz;
    out.total_capacity_mbps = c_fso_mbps + rf::dual_hop_capacity(chosen.link, quote->bandwidth_mhz);
    out.source_profit = quote->source_utility;
    out.relay_profits[quote->relay_id] = quote->relay_utility - game::relay_no_trade_utility(chosen);
    return out;
}

EpochResult run_epoch(const ScenarioConfig& cfg, double kappa_per_km, Rng& rng) {
    const double c_fso = fso::average_capacity(cfg.fso, kappa_per_km);
    if (c_fso >= cfg.c_th_mbps) return evaluate_epoch(cfg, c_fso, {});
    std::vector<RelayDraw> draws;
    draws.reserve(cfg.relay_count());
    for (std::size_t i = 0; i < cfg.relay_count(); ++i) draws.push_back(draw_relay(cfg, rng));
    return evaluate_epoch(cfg, c_fso, draws);
}

std::vector<AggregateStats> sweep_kappa(const ScenarioConfig& cfg,
                                        std::span<const double> kappa_db_grid) {
    if (kappa_db_grid.empty()) throw std::domain_error("attenuation grid is empty");
    cfg.validate();
    std::vector<AggregateStats> out;
    out.reserve(kappa_db_grid.size());
    for (double kappa_db : kappa_db_grid) {
        if (!(kappa_db >= 0.0)) throw std::domain_error("attenuation must be >= 0 dB/km");
        out.push_back(sweep_point(cfg, kappa_db));
    }
    return out;
}

std::vector<AggregateStats> asymptotic_capacity(const ScenarioConfig& cfg,
                                                std::span<const std::size_t> relay_counts,
                                                double kappa_db_per_km) {
    if (relay_counts.empty()) throw std::domain_error("relay-count grid is empty");
    std::vector<AggregateStats> out;
    out.reserve(relay_counts.size());
    for (std::size_t n : relay_counts) {
        if (n < 1) throw std::domain_error("relay count must be >= 1");
        ScenarioConfig scaled = cfg;
        scaled.relays.assign(n, cfg.relays.front());
        const double grid[] = {kappa_db_per_km};
        out.push_back(sweep_kappa(scaled, grid).front());
    }
    return out;
}

double combine_availability(std::size_t total_hours, std::span<const double> p_available) {
    if (total_hours == 0) throw std::domain_error("availability needs at least one hour");
    if (p_available.size() > total_hours) {
        throw std::domain_error("more outage hours than total hours");
    }
    CompensatedSum sum;
    for (double p : p_available) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("availability probability outside [0, 1]");
        sum.add(p);
    }
    sum.add(static_cast<double>(total_hours - p_available.size()));
    return sum.value() / static_cast<double>(total_hours);
}

AvailabilityReport availability(const ScenarioConfig& cfg, std::span<const double> kappa_series,
                                 const AvailabilityEstimator& estimate) {
    if (kappa_series.empty()) throw std::domain_error("attenuation series is empty");
    AvailabilityReport report;
    report.total_hours = kappa_series.size();
    std::map<double, double> capacity_cache;
    for (std::size_t h = 0; h < kappa_series.size(); ++h) {
        const double kappa = kappa_series[h];
        auto it = capacity_cache.find(kappa);
        if (it == capacity_cache.end()) {
            it = capacity_cache.emplace(kappa, fso::average_capacity(cfg.fso, kappa)).first;
        }
        if (it->second < cfg.c_th_mbps) {
            report.outage_hours.push_back(h);
            report.p_available.push_back(estimate(h, it->second));
        }
    }
    const std::vector<double> none(report.outage_hours.size(), 0.0);
    report.fso_only_availability = combine_availability(report.total_hours, none);
    report.availability = combine_availability(report.total_hours, report.p_available);
    return report;
}

AvailabilityReport availability(const ScenarioConfig& cfg, std::span<const double> kappa_series) {
    cfg.validate();
    const std::size_t games = cfg.games_per_interval();
    const auto monte_carlo = [&](std::size_t hour, double c_fso) {
        std::vector<char> ok(games, 0);
        parallel_for(games, cfg.threads, [&](std::size_t g) {
            const auto draws = draw_from_streams(cfg, kAvailabilityStreams, hour, g);
            ok[g] = summarize(cfg, evaluate_epoch(cfg, c_fso, draws)).available;
        });
        return static_cast<double>(std::count(ok.begin(), ok.end(), 1)) / static_cast<double>(games);
    };
    return availability(cfg, kappa_series, monte_carlo);
}

}  // namespace fsotrade::sim
