#include "dsnsim/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace dsnsim {

namespace {

struct Field {
    std::string section;
    std::string key;
    std::function<std::string(const Scenario&)> get;
    std::function<void(Scenario&, std::string_view)> set;

    std::string name() const { return section + "." + key; }
};

[[noreturn]] void bad_value(std::string_view what, std::string_view text) {
    throw std::invalid_argument(fmt::format("expected {}, got '{}'", what, text));
}

template <class Int>
Int parse_integer(std::string_view text) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) bad_value("an integer", text);
    return v;
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) bad_value("a number", text);
    return v;
}

bool parse_bool(std::string_view text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    bad_value("true or false", text);
}

template <class E, std::size_t N>
E parse_enum(std::string_view text, const std::pair<const char*, E> (&table)[N]) {
    for (const auto& [name, value] : table) {
        if (text == name) return value;
    }
    std::string options;
    for (const auto& [name, value] : table) options += (options.empty() ? "" : "|") + std::string(name);
    bad_value(options, text);
}

constexpr std::pair<const char*, ReuseScheme> kSchemes[] = {
    {"full1", ReuseScheme::Full1}, {"hard3", ReuseScheme::Hard3}, {"ffr", ReuseScheme::Ffr}, {"faloha", ReuseScheme::FAloha}};
constexpr std::pair<const char*, SchedulerPolicy> kPolicies[] = {
    {"rr", SchedulerPolicy::RoundRobin}, {"pf", SchedulerPolicy::ProportionalFair}, {"bcqi", SchedulerPolicy::BestCqi}};

std::string format_value(double v) { return fmt::format("{}", v); }
std::string format_value(int v) { return fmt::format("{}", v); }
std::string format_value(std::uint64_t v) { return fmt::format("{}", v); }
std::string format_value(bool v) { return v ? "true" : "false"; }
std::string format_value(const std::string& v) { return v; }
std::string format_value(ReuseScheme v) { return to_string(v); }
std::string format_value(SchedulerPolicy v) { return to_string(v); }

void parse_into(std::string_view t, double& out) { out = parse_double(t); }
void parse_into(std::string_view t, int& out) { out = parse_integer<int>(t); }
void parse_into(std::string_view t, std::uint64_t& out) { out = parse_integer<std::uint64_t>(t); }
void parse_into(std::string_view t, bool& out) { out = parse_bool(t); }
void parse_into(std::string_view t, std::string& out) { out = std::string(t); }
void parse_into(std::string_view t, ReuseScheme& out) { out = parse_enum(t, kSchemes); }
void parse_into(std::string_view t, SchedulerPolicy& out) { out = parse_enum(t, kPolicies); }

template <class Section, class T>
Field field(const char* section, const char* key, Section Scenario::*sec, T Section::*member) {
    return Field{section, key, [=](const Scenario& s) { return format_value(s.*sec.*member); },
                 [=](Scenario& s, std::string_view text) { parse_into(text, s.*sec.*member); }};
}

const std::vector<Field>& registry() {
    using S = Scenario;
    static const std::vector<Field> fields = {
        field("geometry", "inter_site_distance", &S::geometry, &ScenarioGeometry::inter_site_distance),
        field("geometry", "n_macro_sites", &S::geometry, &ScenarioGeometry::n_macro_sites),
        field("geometry", "sectors_per_site", &S::geometry, &ScenarioGeometry::sectors_per_site),
        field("geometry", "picos_per_sector", &S::geometry, &ScenarioGeometry::picos_per_sector),
        field("geometry", "n_ues", &S::geometry, &ScenarioGeometry::n_ues),
        field("geometry", "min_macro_pico_dist", &S::geometry, &ScenarioGeometry::min_macro_pico_dist),
        field("geometry", "min_pico_pico_dist", &S::geometry, &ScenarioGeometry::min_pico_pico_dist),
        field("geometry", "min_macro_ue_dist", &S::geometry, &ScenarioGeometry::min_macro_ue_dist),
        field("geometry", "min_pico_ue_dist", &S::geometry, &ScenarioGeometry::min_pico_ue_dist),
        field("geometry", "macro_tx_power_dbm", &S::geometry, &ScenarioGeometry::macro_tx_power_dbm),
        field("geometry", "pico_tx_power_dbm", &S::geometry, &ScenarioGeometry::pico_tx_power_dbm),
        field("geometry", "macro_antenna_gain_dbi", &S::geometry, &ScenarioGeometry::macro_antenna_gain_dbi),
        field("geometry", "pico_antenna_gain_dbi", &S::geometry, &ScenarioGeometry::pico_antenna_gain_dbi),
        field("geometry", "ue_antenna_gain_dbi", &S::geometry, &ScenarioGeometry::ue_antenna_gain_dbi),
        field("geometry", "ue_speed_kmh", &S::geometry, &ScenarioGeometry::ue_speed_kmh),
        field("geometry", "max_placement_attempts", &S::geometry, &ScenarioGeometry::max_placement_attempts),

        field("propagation", "macro_pathloss_intercept", &S::propagation, &PropagationConfig::macro_pathloss_intercept),
        field("propagation", "macro_pathloss_slope", &S::propagation, &PropagationConfig::macro_pathloss_slope),
        field("propagation", "pico_pathloss_intercept", &S::propagation, &PropagationConfig::pico_pathloss_intercept),
        field("propagation", "pico_pathloss_slope", &S::propagation, &PropagationConfig::pico_pathloss_slope),
        field("propagation", "macro_shadow_sigma", &S::propagation, &PropagationConfig::macro_shadow_sigma),
        field("propagation", "pico_shadow_sigma", &S::propagation, &PropagationConfig::pico_shadow_sigma),
        field("propagation", "shadowing_enabled", &S::propagation, &PropagationConfig::shadowing_enabled),
        field("propagation", "antenna_theta3db", &S::propagation, &PropagationConfig::antenna_theta3db),
        field("propagation", "antenna_max_attenuation", &S::propagation, &PropagationConfig::antenna_max_attenuation),
        field("propagation", "min_distance", &S::propagation, &PropagationConfig::min_distance),
        field("propagation", "carrier_frequency_ghz", &S::propagation, &PropagationConfig::carrier_frequency_ghz),

        field("l2s", "n_rb", &S::l2s, &L2sConfig::n_rb),
        field("l2s", "bandwidth_efficiency", &S::l2s, &L2sConfig::bandwidth_efficiency),
        field("l2s", "snr_efficiency", &S::l2s, &L2sConfig::snr_efficiency),
        field("l2s", "max_spectral_efficiency", &S::l2s, &L2sConfig::max_spectral_efficiency),
        field("l2s", "rb_bandwidth", &S::l2s, &L2sConfig::rb_bandwidth),
        field("l2s", "tti_duration", &S::l2s, &L2sConfig::tti_duration),
        field("l2s", "noise_figure", &S::l2s, &L2sConfig::noise_figure),
        field("l2s", "thermal_noise_density", &S::l2s, &L2sConfig::thermal_noise_density),

        field("reuse", "scheme", &S::reuse, &ReusePolicy::scheme),
        field("reuse", "ffr_center_fraction", &S::reuse, &ReusePolicy::ffr_center_fraction),
        field("reuse", "ffr_edge_sinr_threshold", &S::reuse, &ReusePolicy::ffr_edge_sinr_threshold),
        field("reuse", "faloha_fraction", &S::reuse, &ReusePolicy::faloha_fraction),
        field("reuse", "pico_use_macro_masks", &S::reuse, &ReusePolicy::pico_use_macro_masks),

        field("scheduler", "policy", &S::scheduler, &SchedulerConfig::policy),
        field("scheduler", "pf_time_constant", &S::scheduler, &SchedulerConfig::pf_time_constant),
        field("scheduler", "pf_init_epsilon", &S::scheduler, &SchedulerConfig::pf_init_epsilon),

        field("run", "seed", &S::run, &RunConfig::seed),
        field("run", "ttis", &S::run, &RunConfig::ttis),
        field("run", "drops", &S::run, &RunConfig::drops),
        field("run", "output_dir", &S::run, &RunConfig::output_dir),
        field("run", "center_site_only", &S::run, &RunConfig::center_site_only),
        field("run", "macro_bias_db", &S::run, &RunConfig::macro_bias_db),
        field("run", "pico_bias_db", &S::run, &RunConfig::pico_bias_db),
        field("run", "threads", &S::run, &RunConfig::threads),
        field("run", "check_invariants", &S::run, &RunConfig::check_invariants),
    };
    return fields;
}

const Field* find_field(std::string_view name) {
    const auto& fields = registry();
    const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.name() == name; });
    return it == fields.end() ? nullptr : &*it;
}

bool known_section(std::string_view section) {
    const auto& fields = registry();
    return std::any_of(fields.begin(), fields.end(), [&](const Field& f) { return f.section == section; });
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

Scenario reference_scenario() { return Scenario{}; }

std::vector<std::string> scenario_keys() {
    std::vector<std::string> keys;
    for (const Field& f : registry()) keys.push_back(f.name());
    return keys;
}

void set_scenario_field(Scenario& scenario, std::string_view key, std::string_view value) {
    const Field* f = find_field(key);
    if (f == nullptr) throw ParseError(fmt::format("unknown key '{}'", key), std::string(key));
    try {
        f->set(scenario, trim(value));
    } catch (const std::invalid_argument& e) {
        throw ParseError(fmt::format("{}: {}", key, e.what()), std::string(key));
    }
}

std::string get_scenario_field(const Scenario& scenario, std::string_view key) {
    const Field* f = find_field(key);
    if (f == nullptr) throw ParseError(fmt::format("unknown key '{}'", key), std::string(key));
    return f->get(scenario);
}

void apply_override(Scenario& scenario, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ParseError(fmt::format("override '{}' is not of the form section.key=value", assignment));
    }
    set_scenario_field(scenario, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

Scenario parse_scenario(std::istream& in, std::span<const std::string> overrides, const std::string& source) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError(fmt::format("{}:{}: {}", source, e.line(), e.message()), {}, static_cast<int>(e.line()));
    }

    Scenario scenario = reference_scenario();
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ParseError(fmt::format("{}: key '{}' outside of any section", source, section), section);
        }
        if (!known_section(section)) {
            throw ParseError(fmt::format("{}: unknown section [{}]", source, section), section);
        }
        for (const auto& [key, value] : body) {
            const std::string name = section + "." + key;
            try {
                set_scenario_field(scenario, name, value.data());
            } catch (const ParseError& e) {
                throw ParseError(fmt::format("{}: {}", source, e.what()), name);
            }
        }
    }
    for (const std::string& o : overrides) apply_override(scenario, o);

    try {
        scenario.validate();
    } catch (const std::invalid_argument& e) {
        // Validation messages start with the key they are about.
        const std::string message = e.what();
        std::string key = message.substr(0, message.find(' '));
        if (find_field(key) == nullptr) key.clear();
        throw ParseError(fmt::format("{}: {}", source, message), key);
    }
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path, std::span<const std::string> overrides) {
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot open scenario file '{}'", path.string()));
    return parse_scenario(in, overrides, path.string());
}

std::string render_scenario(const Scenario& scenario) {
    std::string out = "; dsnsim scenario (resolved)\n";
    std::string current;
    for (const Field& f : registry()) {
        if (f.section != current) {
            out += fmt::format("{}[{}]\n", current.empty() ? "" : "\n", f.section);
            current = f.section;
        }
        out += fmt::format("{} = {}\n", f.key, f.get(scenario));
    }
    return out;
}

}  // namespace dsnsim
