#include "fsotrade/cli_runner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "fsotrade/errors.hpp"
#include "fsotrade/market_sim.hpp"
#include "fsotrade/trading_game.hpp"
#include "fsotrade/weather_ingest.hpp"

namespace fsotrade::cli {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands{{
    {Command::DemandCurve, "demand-curve"},
    {Command::SupplyCurve, "supply-curve"},
    {Command::Equilibrium, "equilibrium"},
    {Command::Sweep, "sweep"},
    {Command::Asymptote, "asymptote"},
    {Command::Profit, "profit"},
    {Command::Availability, "availability"},
    {Command::FixtureGen, "fixture-gen"},
}};

class CsvWriter {
public:
    explicit CsvWriter(std::initializer_list<std::string_view> header) { row(header); }

    void row(std::initializer_list<std::string_view> cells) {
        bool first = true;
        for (auto c : cells) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }

std::vector<double> price_grid(const ExperimentSettings& e) {
    std::vector<double> grid;
    if (e.price_points == 1) return {e.price_min};
    const double step = (e.price_max - e.price_min) / static_cast<double>(e.price_points - 1);
    for (std::size_t i = 0; i < e.price_points; ++i) grid.push_back(e.price_min + step * static_cast<double>(i));
    return grid;
}

std::vector<double> kappa_grid(const ExperimentSettings& e) {
    const double span = e.kappa_max_db_per_km - e.kappa_min_db_per_km;
    const auto n = static_cast<std::size_t>(std::floor(span / e.kappa_step_db_per_km + 1e-9)) + 1;
    std::vector<double> grid;
    for (std::size_t i = 0; i < n; ++i) {
        grid.push_back(e.kappa_min_db_per_km + e.kappa_step_db_per_km * static_cast<double>(i));
    }
    return grid;
}

game::SourceState experiment_source(const Scenario& s) {
    return {s.experiment.c_bar_o_mbps, s.game.c_th_mbps, s.game.lambda};
}

game::RelayProfile experiment_relay(const Scenario& s) {
    game::RelayProfile relay;
    relay.id = 0;
    relay.link = s.experiment_link();
    relay.ues = s.experiment.ues;
    relay.rate_per_ue_mbps = s.game.rate_per_ue_mbps;
    relay.c1 = s.game.c1;
    relay.c2 = s.game.c2;
    return relay;
}

void append_sweep_rows(CsvWriter& csv, const std::vector<sim::AggregateStats>& stats,
                       std::uint64_t seed) {
    for (const auto& s : stats) {
        csv.row({num(s.kappa_db_per_km), num(s.mean_capacity_mbps), num(s.trade_rate),
                 num(s.mean_source_profit), num(s.mean_total_relay_profit), num(s.relay_count),
                 num(s.upsilon_m), std::to_string(seed), num(s.fso_capacity_mbps)});
    }
}

CsvWriter sweep_writer() {
    return CsvWriter({"kappa_db_per_km", "mean_capacity_mbps", "trade_rate", "source_profit",
                      "relay_profit", "n", "upsilon_m", "seed", "fso_capacity_mbps"});
}

std::string render_demand(const Scenario& s) {
    CsvWriter csv({"price_per_mhz", "demand_mhz", "regime"});
    const game::SourceState source = experiment_source(s);
    if (!source.triggered()) {
        for (double p : price_grid(s.experiment)) csv.row({num(p), num(0.0), "quit"});
        return csv.str();
    }
    const game::DemandFunction demand(source, s.experiment_link());
    for (double p : price_grid(s.experiment)) {
        const auto point = demand(p);
        csv.row({num(p), num(point.bandwidth_mhz), game::to_string(point.regime)});
    }
    return csv.str();
}

std::string render_supply(const Scenario& s) {
    CsvWriter csv({"price_per_mhz", "supply_mhz"});
    const auto relay = experiment_relay(s);
    for (double p : price_grid(s.experiment)) csv.row({num(p), num(game::supply(p, relay))});
    return csv.str();
}

std::string render_equilibrium(const Scenario& s) {
    CsvWriter csv({"c_bar_o_mbps", "ues", "status", "price_per_mhz", "bandwidth_mhz",
                   "source_utility", "relay_utility"});
    const auto source = experiment_source(s);
    const auto relay = experiment_relay(s);
    const std::string c = num(source.c_bar_o_mbps);
    const std::string m = std::to_string(relay.ues);
    if (!source.triggered()) {
        csv.row({c, m, "no-trigger", "", "", "", ""});
        return csv.str();
    }
    const auto quote = game::market_equilibrium(source, relay);
    if (!quote) {
        csv.row({c, m, "no-equilibrium", "", "", "", ""});
    } else {
        csv.row({c, m, "equilibrium", num(quote->price), num(quote->bandwidth_mhz),
                 num(quote->source_utility), num(quote->relay_utility)});
    }
    return csv.str();
}

std::string render_sweep(const Scenario& s) {
    CsvWriter csv = sweep_writer();
    const auto grid = kappa_grid(s.experiment);
    append_sweep_rows(csv, sim::sweep_kappa(s.sim_config(), grid), s.sim.seed);
    return csv.str();
}

std::string render_profit(const Scenario& s) {
    CsvWriter csv = sweep_writer();
    const auto grid = kappa_grid(s.experiment);
    auto cfg = s.sim_config();
    for (std::size_t n : s.experiment.profit_relay_counts) {
        cfg.relays.assign(n, cfg.relays.front());
        append_sweep_rows(csv, sim::sweep_kappa(cfg, grid), s.sim.seed);
    }
    return csv.str();
}

std::string render_asymptote(const Scenario& s) {
    CsvWriter csv({"n", "upsilon_m", "kappa_db_per_km", "mean_capacity_mbps", "capacity_stderr_mbps",
                   "trade_rate", "seed"});
    std::vector<std::size_t> counts(s.experiment.max_relays);
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = i + 1;
    const auto stats =
        sim::asymptotic_capacity(s.sim_config(), counts, s.experiment.asymptote_kappa_db_per_km);
    for (const auto& st : stats) {
        csv.row({num(st.relay_count), num(st.upsilon_m), num(st.kappa_db_per_km),
                 num(st.mean_capacity_mbps), num(st.capacity_stderr_mbps), num(st.trade_rate),
                 std::to_string(s.sim.seed)});
    }
    return csv.str();
}

std::string render_availability(const Scenario& s) {
    if (s.experiment.visibility_file.empty()) {
        throw ConfigError("experiment.visibility_file", "required by the availability command");
    }
    const auto series = weather::load_series(s.experiment.visibility_file);
    if (series.empty()) throw ConfigError("experiment.visibility_file", "series has no rows");
    const auto attenuation = weather::to_attenuation(series, s.fso.wavelength_m);
    std::vector<double> kappa;
    kappa.reserve(attenuation.size());
    for (const auto& a : attenuation) kappa.push_back(a.kappa_per_km);

    const auto report = sim::availability(s.sim_config(), kappa);
    const auto fog = weather::fog_statistics(series);
    CsvWriter csv({"total_hours", "outage_hours", "fog_hours", "fso_only_availability",
                   "availability", "n", "upsilon_m", "seed"});
    csv.row({num(report.total_hours), num(report.outage_hours.size()), num(fog.fog_hours),
             num(report.fso_only_availability), num(report.availability), num(s.sim.relays),
             num(s.sim.upsilon_m), std::to_string(s.sim.seed)});
    return csv.str();
}

std::string render_fixture(const Scenario& s) {
    weather::FixtureSpec spec;
    spec.hours = s.experiment.fixture_hours;
    spec.fog_hours = s.experiment.fixture_fog_hours;
    spec.seed = s.sim.seed;
    std::ostringstream out;
    weather::serialize_series(out, weather::synthetic_fixture(spec));
    return out.str();
}

}  // namespace

std::string_view to_string(Command command) {
    for (const auto& [c, name] : kCommands) {
        if (c == command) return name;
    }
    return "unknown";
}

std::optional<Command> parse_command(std::string_view text) {
    for (const auto& [c, name] : kCommands) {
        if (name == text) return c;
    }
    return std::nullopt;
}

std::vector<std::string> command_names() {
    std::vector<std::string> names;
    for (const auto& [c, name] : kCommands) names.emplace_back(name);
    return names;
}

Scenario effective_scenario(const RunConfig& config) {
    Scenario scenario = config.scenario ? load_scenario(*config.scenario) : Scenario{};
    for (const auto& o : config.overrides) apply_override(scenario, o);
    if (config.seed) scenario.sim.seed = *config.seed;
    scenario.validate();
    return scenario;
}

std::string render(Command command, const Scenario& scenario) {
    switch (command) {
        case Command::DemandCurve: return render_demand(scenario);
        case Command::SupplyCurve: return render_supply(scenario);
        case Command::Equilibrium: return render_equilibrium(scenario);
        case Command::Sweep: return render_sweep(scenario);
        case Command::Asymptote: return render_asymptote(scenario);
        case Command::Profit: return render_profit(scenario);
        case Command::Availability: return render_availability(scenario);
        case Command::FixtureGen: return render_fixture(scenario);
    }
    throw std::logic_error("unhandled command");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const Scenario scenario = effective_scenario(config);
        std::string text;
        if (config.dump_config) {
            std::ostringstream dump;
            dump_scenario(dump, scenario);
            text = dump.str();
        } else if (config.command) {
            text = render(*config.command, scenario);
        } else {
            err << "error: no command given (expected one of: demand-curve, supply-curve, "
                   "equilibrium, sweep, asymptote, profit, availability, fixture-gen)\n";
            return 2;
        }
        if (config.out) {
            std::ofstream file(*config.out, std::ios::binary);
            if (!file) {
                err << "error: --out: cannot write " << config.out->string() << '\n';
                return 1;
            }
            file << text;
        } else {
            out << text;
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "error: scenario field " << e.what() << '\n';
    } catch (const ParseError& e) {
        err << "error: parse: " << e.what() << '\n';
    } catch (const ValidationError& e) {
        err << "error: validation: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hybrid RF/FSO spectrum-trading simulator"};
    RunConfig config;
    std::string command;
    std::string scenario;
    std::string out_path;
    std::uint64_t seed = 0;

    app.add_option("command", command, "Experiment to run")->check(CLI::IsMember(command_names()));
    app.add_option("--scenario", scenario, "Scenario file (defaults to the baseline parameters)");
    app.add_option("--out", out_path, "Output path (stdout when omitted)");
    auto* seed_opt = app.add_option("--seed", seed, "Override sim.seed");
    app.add_option("--set", config.overrides, "Override a scenario key: section.key=value")
        ->allow_extra_args(false);
    app.add_flag("--dump-config", config.dump_config, "Print the effective scenario and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    if (!command.empty()) config.command = parse_command(command);
    if (!scenario.empty()) config.scenario = scenario;
    if (!out_path.empty()) config.out = out_path;
    if (seed_opt->count() > 0) config.seed = seed;
    return run(config, out, err);
}

}  // namespace fsotrade::cli
