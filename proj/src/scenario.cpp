#include "fsotrade/scenario.hpp"

#include <charconv>
#include <concepts>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fsotrade/errors.hpp"
#include "fsotrade/units.hpp"

namespace fsotrade {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& field, std::string_view text) {
    text = trim(text);
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw ConfigError(field, "cannot parse '" + std::string(text) + "' as a number");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ConfigError(field, "value must be finite");
    }
    return value;
}

template <class T>
std::vector<T> parse_list(const std::string& field, std::string_view text) {
    std::vector<T> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_number<T>(field, text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_value(double v) { return format_number(v); }
template <std::unsigned_integral T>
std::string format_value(T v) {
    return std::to_string(v);
}

template <class T>
std::string format_list(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_value(values[i]);
    }
    return out;
}

struct Field {
    std::string name;  // section.key
    std::function<std::string(const Scenario&)> get;
    std::function<void(Scenario&, const std::string&, std::string_view)> set;
};

template <class T, class Member>
Field number_field(std::string name, Member member) {
    return {std::move(name),
            [member](const Scenario& s) { return format_value(member(const_cast<Scenario&>(s))); },
            [member](Scenario& s, const std::string& field, std::string_view text) {
                member(s) = parse_number<T>(field, text);
            }};
}

template <class T, class Member>
Field list_field(std::string name, Member member) {
    return {std::move(name),
            [member](const Scenario& s) { return format_list(member(const_cast<Scenario&>(s))); },
            [member](Scenario& s, const std::string& field, std::string_view text) {
                member(s) = parse_list<T>(field, text);
            }};
}

#define FSOTRADE_NUM(T, key, expr) number_field<T>(key, [](Scenario& s) -> T& { return s.expr; })
#define FSOTRADE_LIST(T, key, expr) \
    list_field<T>(key, [](Scenario& s) -> std::vector<T>& { return s.expr; })

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f{
            FSOTRADE_NUM(double, "fso.aperture_diameter_m", fso.aperture_diameter_m),
            FSOTRADE_NUM(double, "fso.divergence_rad", fso.divergence_rad),
            FSOTRADE_NUM(double, "fso.distance_m", fso.distance_m),
            FSOTRADE_NUM(double, "fso.wavelength_m", fso.wavelength_m),
            FSOTRADE_NUM(double, "fso.responsivity", fso.responsivity),
            FSOTRADE_NUM(double, "fso.noise_variance_a2", fso.noise_variance_a2),
            FSOTRADE_NUM(double, "fso.power_w", fso.power_w),
            FSOTRADE_NUM(double, "fso.bandwidth_mhz", fso.bandwidth_mhz),
            FSOTRADE_NUM(double, "fso.cn2", fso.cn2),

            FSOTRADE_NUM(double, "rf.wavelength_m", rf.wavelength_m),
            FSOTRADE_NUM(double, "rf.gain_tx_dbi", rf.gain_tx_dbi),
            FSOTRADE_NUM(double, "rf.gain_rx_dbi", rf.gain_rx_dbi),
            FSOTRADE_NUM(double, "rf.reference_distance_m", rf.reference_distance_m),
            FSOTRADE_NUM(double, "rf.path_loss_exponent", rf.path_loss_exponent),
            FSOTRADE_NUM(double, "rf.noise_psd_dbm_per_mhz", rf.noise_psd_dbm_per_mhz),
            FSOTRADE_NUM(double, "rf.source_power_w", rf.source_power_w),
            FSOTRADE_NUM(double, "rf.relay_power_w", rf.relay_power_w),
        };
        f.push_back({"rf.fading",
                     [](const Scenario& s) { return std::string(rf::to_string(s.rf.fading)); },
                     [](Scenario& s, const std::string& field, std::string_view text) {
                         try {
                             s.rf.fading = rf::parse_fading_kind(trim(text));
                         } catch (const std::invalid_argument& e) {
                             throw ConfigError(field, e.what());
                         }
                     }});
        std::vector<Field> rest{
            FSOTRADE_NUM(double, "game.lambda", game.lambda),
            FSOTRADE_NUM(double, "game.c_th_mbps", game.c_th_mbps),
            FSOTRADE_NUM(double, "game.bandwidth_mhz", game.bandwidth_mhz),
            FSOTRADE_NUM(double, "game.rate_per_ue_mbps", game.rate_per_ue_mbps),
            FSOTRADE_NUM(double, "game.c1", game.c1),
            FSOTRADE_NUM(double, "game.c2", game.c2),

            FSOTRADE_NUM(std::size_t, "sim.relays", sim.relays),
            FSOTRADE_LIST(double, "sim.hop1_distances_m", sim.hop1_distances_m),
            FSOTRADE_LIST(double, "sim.hop2_distances_m", sim.hop2_distances_m),
            FSOTRADE_NUM(double, "sim.upsilon_m", sim.upsilon_m),
            FSOTRADE_NUM(std::size_t, "sim.samples_per_point", sim.samples_per_point),
            FSOTRADE_NUM(std::uint64_t, "sim.seed", sim.seed),
            FSOTRADE_NUM(double, "sim.t_c_s", sim.t_c_s),
            FSOTRADE_NUM(double, "sim.t_f_s", sim.t_f_s),
            FSOTRADE_NUM(double, "sim.t_t_s", sim.t_t_s),
            FSOTRADE_NUM(std::size_t, "sim.threads", sim.threads),

            FSOTRADE_NUM(double, "experiment.c_bar_o_mbps", experiment.c_bar_o_mbps),
            FSOTRADE_NUM(unsigned, "experiment.ues", experiment.ues),
            FSOTRADE_NUM(double, "experiment.hop1_fading_power", experiment.hop1_fading_power),
            FSOTRADE_NUM(double, "experiment.hop2_fading_power", experiment.hop2_fading_power),
            FSOTRADE_NUM(double, "experiment.price_min", experiment.price_min),
            FSOTRADE_NUM(double, "experiment.price_max", experiment.price_max),
            FSOTRADE_NUM(std::size_t, "experiment.price_points", experiment.price_points),
            FSOTRADE_NUM(double, "experiment.kappa_min_db_per_km", experiment.kappa_min_db_per_km),
            FSOTRADE_NUM(double, "experiment.kappa_max_db_per_km", experiment.kappa_max_db_per_km),
            FSOTRADE_NUM(double, "experiment.kappa_step_db_per_km", experiment.kappa_step_db_per_km),
            FSOTRADE_NUM(double, "experiment.asymptote_kappa_db_per_km", experiment.asymptote_kappa_db_per_km),
            FSOTRADE_NUM(std::size_t, "experiment.max_relays", experiment.max_relays),
            FSOTRADE_LIST(std::size_t, "experiment.profit_relay_counts", experiment.profit_relay_counts),
        };
        f.insert(f.end(), rest.begin(), rest.end());
        f.push_back({"experiment.visibility_file",
                     [](const Scenario& s) { return s.experiment.visibility_file; },
                     [](Scenario& s, const std::string&, std::string_view text) {
                         s.experiment.visibility_file = std::string(trim(text));
                     }});
        f.push_back(FSOTRADE_NUM(std::size_t, "experiment.fixture_hours", experiment.fixture_hours));
        f.push_back(FSOTRADE_NUM(std::size_t, "experiment.fixture_fog_hours", experiment.fixture_fog_hours));
        return f;
    }();
    return table;
}

#undef FSOTRADE_NUM
#undef FSOTRADE_LIST

const Field& find_field(const std::string& name) {
    for (const auto& f : fields()) {
        if (f.name == name) return f;
    }
    throw ConfigError(name, "unknown key");
}

void check(bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

rf::RfLinkParams RfSettings::params() const {
    rf::RfLinkParams p;
    p.wavelength_m = wavelength_m;
    p.gain_tx = units::db_to_linear(gain_tx_dbi);
    p.gain_rx = units::db_to_linear(gain_rx_dbi);
    p.reference_distance_m = reference_distance_m;
    p.path_loss_exponent = path_loss_exponent;
    p.noise_psd_w_per_mhz = units::dbm_to_watt(noise_psd_dbm_per_mhz);
    p.source_power_w = source_power_w;
    p.relay_power_w = relay_power_w;
    return p;
}

void Scenario::validate() const {
    try {
        fso.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError("fso", e.what());
    }
    try {
        rf.params().validate();
    } catch (const std::domain_error& e) {
        throw ConfigError("rf", e.what());
    }
    check(game.lambda > 0.0, "game.lambda", "must be > 0");
    check(game.c_th_mbps > 0.0, "game.c_th_mbps", "must be > 0");
    check(game.bandwidth_mhz > 0.0, "game.bandwidth_mhz", "must be > 0");
    check(game.rate_per_ue_mbps > 0.0, "game.rate_per_ue_mbps", "must be > 0");
    check(game.c1 > 0.0, "game.c1", "must be > 0");
    check(game.c2 > 0.0, "game.c2", "must be > 0");

    check(sim.relays >= 1, "sim.relays", "must be >= 1");
    const auto list_ok = [&](const std::vector<double>& v) {
        return v.size() == 1 || v.size() == sim.relays;
    };
    check(list_ok(sim.hop1_distances_m), "sim.hop1_distances_m", "needs one value or one per relay");
    check(list_ok(sim.hop2_distances_m), "sim.hop2_distances_m", "needs one value or one per relay");
    for (double d : sim.hop1_distances_m) {
        check(d >= rf.reference_distance_m, "sim.hop1_distances_m", "must be >= rf.reference_distance_m");
    }
    for (double d : sim.hop2_distances_m) {
        check(d >= rf.reference_distance_m, "sim.hop2_distances_m", "must be >= rf.reference_distance_m");
    }
    check(sim.upsilon_m >= 0.0, "sim.upsilon_m", "must be >= 0");
    check(sim.samples_per_point >= 1, "sim.samples_per_point", "must be >= 1");
    check(sim.t_c_s > 0.0, "sim.t_c_s", "must be > 0");
    check(sim.t_f_s > 0.0, "sim.t_f_s", "must be > 0");
    check(sim.t_t_s > 0.0, "sim.t_t_s", "must be > 0");
    check(std::min(sim.t_f_s, sim.t_t_s) <= sim.t_c_s, "sim.t_c_s", "must be >= min(t_f_s, t_t_s)");

    const auto& e = experiment;
    check(e.c_bar_o_mbps >= 0.0, "experiment.c_bar_o_mbps", "must be >= 0");
    check(e.hop1_fading_power > 0.0, "experiment.hop1_fading_power", "must be > 0");
    check(e.hop2_fading_power > 0.0, "experiment.hop2_fading_power", "must be > 0");
    check(e.price_min > 0.0, "experiment.price_min", "must be > 0");
    check(e.price_max >= e.price_min, "experiment.price_max", "must be >= price_min");
    check(e.price_points >= 1, "experiment.price_points", "must be >= 1");
    check(e.kappa_min_db_per_km >= 0.0, "experiment.kappa_min_db_per_km", "must be >= 0");
    check(e.kappa_max_db_per_km >= e.kappa_min_db_per_km, "experiment.kappa_max_db_per_km",
          "must be >= kappa_min_db_per_km");
    check(e.kappa_step_db_per_km > 0.0, "experiment.kappa_step_db_per_km", "must be > 0");
    check(e.asymptote_kappa_db_per_km >= 0.0, "experiment.asymptote_kappa_db_per_km", "must be >= 0");
    check(e.max_relays >= 1, "experiment.max_relays", "must be >= 1");
    for (auto n : e.profit_relay_counts) check(n >= 1, "experiment.profit_relay_counts", "must be >= 1");
    check(e.fixture_fog_hours <= e.fixture_hours, "experiment.fixture_fog_hours",
          "must not exceed fixture_hours");
}

sim::ScenarioConfig Scenario::sim_config() const {
    sim::ScenarioConfig cfg;
    cfg.fso = fso;
    cfg.rf = rf.params();
    cfg.fading.kind = rf.fading;
    cfg.relays.clear();
    for (std::size_t i = 0; i < sim.relays; ++i) {
        const auto pick = [&](const std::vector<double>& v) { return v.size() == 1 ? v[0] : v[i]; };
        cfg.relays.push_back({pick(sim.hop1_distances_m), pick(sim.hop2_distances_m)});
    }
    cfg.bandwidth_mhz = game.bandwidth_mhz;
    cfg.upsilon_m = sim.upsilon_m;
    cfg.rate_per_ue_mbps = game.rate_per_ue_mbps;
    cfg.c1 = game.c1;
    cfg.c2 = game.c2;
    cfg.lambda = game.lambda;
    cfg.c_th_mbps = game.c_th_mbps;
    cfg.samples_per_point = sim.samples_per_point;
    cfg.seed = sim.seed;
    cfg.t_c_s = sim.t_c_s;
    cfg.t_f_s = sim.t_f_s;
    cfg.t_t_s = sim.t_t_s;
    cfg.threads = sim.threads;
    return cfg;
}

rf::DualHopLink Scenario::experiment_link() const {
    const auto params = rf.params();
    const auto hop1 = rf::make_hop(params, sim.hop1_distances_m.front(), experiment.hop1_fading_power);
    const auto hop2 = rf::make_hop(params, sim.hop2_distances_m.front(), experiment.hop2_fading_power);
    return rf::make_dual_hop(params, hop1, hop2, game.bandwidth_mhz);
}

Scenario parse_scenario(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError("scenario line " + std::to_string(e.line()) + ": " + e.message(), e.line());
    }
    Scenario scenario;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError(section, "key outside of a [section]");
        for (const auto& [key, value] : body) {
            const std::string name = section + "." + key;
            find_field(name).set(scenario, name, value.data());
        }
    }
    scenario.validate();
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--scenario", "cannot open " + path.string());
    return parse_scenario(in);
}

void apply_override(Scenario& scenario, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError(std::string(assignment), "override must look like section.key=value");
    }
    const std::string name(trim(assignment.substr(0, eq)));
    find_field(name).set(scenario, name, assignment.substr(eq + 1));
}

void dump_scenario(std::ostream& out, const Scenario& scenario) {
    std::string current;
    for (const auto& f : fields()) {
        const auto dot = f.name.find('.');
        const std::string section = f.name.substr(0, dot);
        if (section != current) {
            if (!current.empty()) out << '\n';
            out << '[' << section << "]\n";
            current = section;
        }
        out << f.name.substr(dot + 1) << " = " << f.get(scenario) << '\n';
    }
}

std::vector<std::string> scenario_keys() {
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.push_back(f.name);
    return keys;
}

}  // namespace fsotrade
