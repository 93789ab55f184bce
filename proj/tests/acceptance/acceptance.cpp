// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fsotrade/cli_runner.hpp"
#include "fsotrade/fso_channel.hpp"
#include "fsotrade/market_sim.hpp"
#include "fsotrade/root_finding.hpp"
#include "fsotrade/scenario.hpp"
#include "fsotrade/trading_game.hpp"
#include "fsotrade/units.hpp"
#include "fsotrade/weather_ingest.hpp"
#include "oracle_checks.hpp"

namespace game = fsotrade::game;
namespace sim = fsotrade::sim;
namespace fso = fsotrade::fso;
using fsotrade::testing::baseline_link;
using fsotrade::testing::baseline_relay;

namespace {

class Checks {
public:
    void expect_near(const std::string& label, double value, double target, double tol) {
        const bool ok = std::abs(value - target) <= tol;
        add(ok, label + "=" + fmt(value) + " (" + fmt(target) + "±" + fmt(tol) + ")");
    }
    void expect(bool ok, const std::string& label) { add(ok, label); }

    bool ok() const { return ok_; }
    std::string detail() const { return detail_.str(); }

    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return buf;
    }

private:
    void add(bool ok, const std::string& text) {
        if (!first_) detail_ << "; ";
        first_ = false;
        detail_ << text << (ok ? "" : " MISS");
        ok_ = ok_ && ok;
    }

    bool ok_ = true;
    bool first_ = true;
    std::ostringstream detail_;
};

struct Criterion {
    const char* id;
    const char* name;
    double limit_s;  // <= 0: no runtime limit
    std::function<void(Checks&)> run;
};

sim::ScenarioConfig mc_config(std::size_t relays, double upsilon) {
    sim::ScenarioConfig cfg;
    cfg.relays.assign(relays, sim::RelayGeometry{});
    cfg.upsilon_m = upsilon;
    cfg.samples_per_point = 3000;
    return cfg;
}

double mc_point(const sim::ScenarioConfig& cfg, double kappa_db, double limit_s, Checks& c, const std::string& label) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> grid{kappa_db};
    const double mean = sim::sweep_kappa(cfg, grid)[0].mean_capacity_mbps;
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(s < limit_s, label + " runtime " + Checks::fmt(s) + " s");
    return mean;
}

void criterion_min_bandwidth(Checks& c) {
    const auto link = baseline_link();
    const game::DemandFunction d30({30.0}, link);
    const game::DemandFunction d70({70.0}, link);
    c.expect_near("b_min(30)", *d30.b_min(), 8.94, 0.05);
    c.expect_near("b_min(70)", *d70.b_min(), 1.64, 0.05);
}

// Price where demand drops to zero, located on the demand function itself.
double demand_drop_price(const game::DemandFunction& d) {
    const auto br = fsotrade::bisect([&](double p) { return d(p).bandwidth_mhz; }, 1e-6, 100.0);
    return br.hi;
}

void criterion_cutoff(Checks& c) {
    const auto link = baseline_link();
    c.expect_near("cutoff(30)", demand_drop_price(game::DemandFunction({30.0}, link)), 5.57, 0.05);
    c.expect_near("cutoff(70)", demand_drop_price(game::DemandFunction({70.0}, link)), 6.03, 0.05);
}

void criterion_demand(Checks& c) {
    c.expect_near("D(5;L2=600)", game::demand(5.0, {40.0}, baseline_link(600, 600)).bandwidth_mhz, 18.0, 0.5);
    c.expect_near("D(5;L2=700)", game::demand(5.0, {40.0}, baseline_link(600, 700)).bandwidth_mhz, 11.0, 0.5);
}

void criterion_supply(Checks& c) {
    const auto relay = baseline_relay(25);
    c.expect_near("S(1)", game::supply(1.0, relay), 13.1, 0.1);
    c.expect_near("S(3.5)", game::supply(3.5, relay), 13.7, 0.1);
}

void criterion_equilibrium(Checks& c) {
    const game::SourceState source{25.0};
    const auto q20 = game::market_equilibrium(source, baseline_relay(20, 700, 700));
    const auto q30 = game::market_equilibrium(source, baseline_relay(30, 700, 700));
    const auto q40 = game::market_equilibrium(source, baseline_relay(40, 700, 700));
    c.expect(q20.has_value(), "M=20 clears");
    if (q20) c.expect_near("p*(M=20)", q20->price, 4.68, 0.03);
    c.expect(q30.has_value(), "M=30 clears");
    if (q30) c.expect_near("p*(M=30)", q30->price, 4.75, 0.03);
    c.expect(!q40.has_value(), "M=40 no equilibrium");
}

void criterion_monte_carlo(Checks& c) {
    const double asym = 60.0;
    c.expect_near("N1,u5,k60", mc_point(mc_config(1, 5.0), asym, 60.0, c, "N1,u5,k60"), 76.15, 2.0);
    c.expect_near("N1,u10,k60", mc_point(mc_config(1, 10.0), asym, 60.0, c, "N1,u10,k60"), 63.42, 2.0);
    c.expect_near("N1,u5,k20", mc_point(mc_config(1, 5.0), 20.0, 60.0, c, "N1,u5,k20"), 84.57, 2.0);
    c.expect_near("N3,u5,k20", mc_point(mc_config(3, 5.0), 20.0, 60.0, c, "N3,u5,k20"), 102.30, 2.0);
}

void criterion_fso_threshold(Checks& c) {
    const fso::FsoLinkParams p;
    const auto excess = [&](double db) {
        return fso::average_capacity(p, fsotrade::units::kappa_from_db_per_km(db)) - 80.0;
    };
    const auto br = fsotrade::bisect(excess, 0.0, 40.0, {.rel_tol = 1e-6});
    c.expect_near("kappa(C=80)", br.mid(), 13.23, 0.5);
}

void criterion_oracles(Checks& c) {
    namespace t = fsotrade::testing;
    const auto report = [&](const char* name, const t::OracleReport& r) {
        c.expect(r.failed == 0, std::string(name) + " " + std::to_string(r.checked - r.failed) + "/" +
                                    std::to_string(r.checked) + (r.failed ? " first: " + r.first_failure : ""));
    };
    report("demand-grid", t::check_demand_oracle());
    report("supply-grid", t::check_supply_oracle());
    report("derivative-fd", t::check_derivative_oracle());
    report("time-share", t::check_time_share());
}

void criterion_availability(Checks& c) {
    const auto series = fsotrade::weather::load_series(FSOTRADE_TEST_DATA_DIR "/visibility_fixture_1000h.csv");
    std::vector<double> kappa;
    for (const auto& a : fsotrade::weather::to_attenuation(series, 1550e-9)) kappa.push_back(a.kappa_per_km);
    const sim::ScenarioConfig cfg;

    const std::vector<double> pinned{0.9, 0.75, 1.0, 0.5, 0.999, 0.125};
    std::size_t next = 0;
    const auto report = sim::availability(cfg, kappa, [&](std::size_t, double) { return pinned.at(next++); });
    c.expect(report.total_hours == 1000 && report.outage_hours.size() == 6, "1000 h, 6 outage hours");
    // (sum P_ava + (H_tot - H_out)) / H_tot by hand.
    const double hand = (0.9 + 0.75 + 1.0 + 0.5 + 0.999 + 0.125 + 994.0) / 1000.0;
    c.expect(std::abs(report.availability - hand) <= 1e-12, "availability=" + Checks::fmt(report.availability) +
                                                                " hand=" + Checks::fmt(hand));

    const std::vector<double> clear(100, 0.0);
    c.expect(sim::availability(cfg, clear, [](std::size_t, double) { return 0.0; }).availability == 1.0,
             "no outage -> 1");
    const auto zero = sim::availability(cfg, kappa, [](std::size_t, double) { return 0.0; });
    c.expect(std::abs(zero.availability - 0.994) <= 1e-12 && zero.availability == zero.fso_only_availability,
             "P=0 -> FSO-only 0.994");
    c.expect(sim::availability(cfg, kappa, [](std::size_t, double) { return 1.0; }).availability == 1.0, "P=1 -> 1");
}

void criterion_determinism(Checks& c) {
    using fsotrade::cli::Command;
    fsotrade::Scenario s;
    s.sim.samples_per_point = 200;
    s.sim.relays = 3;
    s.sim.t_f_s = 30.0;
    s.experiment.kappa_step_db_per_km = 5.0;
    s.experiment.max_relays = 4;
    s.experiment.visibility_file = FSOTRADE_TEST_DATA_DIR "/visibility_fixture_1000h.csv";
    for (const auto& name : fsotrade::cli::command_names()) {
        const Command cmd = *fsotrade::cli::parse_command(name);
        const std::string a = fsotrade::cli::render(cmd, s);
        auto single = s;
        single.sim.threads = 1;
        auto many = s;
        many.sim.threads = 3;
        const bool same = a == fsotrade::cli::render(cmd, single) && a == fsotrade::cli::render(cmd, many);
        c.expect(same && !a.empty(), name);
    }
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"C1", "minimum bandwidth", 1.0, criterion_min_bandwidth},
        {"C2", "demand cutoff prices", 1.0, criterion_cutoff},
        {"C3", "demand values", 1.0, criterion_demand},
        {"C4", "supply values", 1.0, criterion_supply},
        {"C5", "market equilibrium", 1.0, criterion_equilibrium},
        {"C6", "Monte Carlo capacity", 0.0, criterion_monte_carlo},  // per-point limit checked inside
        {"C7", "FSO 80 Mbps threshold", 5.0, criterion_fso_threshold},
        {"C8", "oracle equivalence (200 scenarios)", 120.0, criterion_oracles},
        {"C9", "availability formula", 0.0, criterion_availability},
        {"C10", "determinism", 0.0, criterion_determinism},
    };
    int failures = 0;
    for (const auto& cr : criteria) {
        Checks checks;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(checks);
        } catch (const std::exception& e) {
            checks.expect(false, std::string("exception: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.limit_s > 0.0) checks.expect(s < cr.limit_s, "runtime < " + Checks::fmt(cr.limit_s) + " s");
        if (!checks.ok()) ++failures;
        std::printf("%s %-4s %-36s %8.3f s  %s\n", checks.ok() ? "PASS" : "FAIL", cr.id, cr.name, s,
                    checks.detail().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
