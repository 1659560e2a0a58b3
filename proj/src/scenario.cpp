#include "elaa/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace elaa {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

double to_double(const std::string& v, const std::string& where) {
    try {
        std::size_t used = 0;
        const double out = std::stod(v, &used);
        if (used == v.size()) return out;
    } catch (const std::exception&) {
    }
    throw ConfigError(where + ": '" + v + "' is not a number");
}

long long to_int(const std::string& v, const std::string& where) {
    long long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) throw ConfigError(where + ": '" + v + "' is not an integer");
    return out;
}

std::uint64_t to_u64(const std::string& v, const std::string& where) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) throw ConfigError(where + ": '" + v + "' is not an unsigned integer");
    return out;
}

std::vector<DetectorEntry> parse_detectors(const std::string& v, const std::string& where) {
    std::vector<DetectorEntry> out;
    std::istringstream items(v);
    std::string item;
    while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::istringstream parts(item);
        std::string method, mode, iters;
        std::getline(parts, method, ':');
        std::getline(parts, mode, ':');
        std::getline(parts, iters, ':');
        DetectorEntry e;
        e.method = parse_method(trim(method));
        mode = lower(trim(mode));
        if (mode == "uwsvd") e.uwsvd = true;
        else if (mode == "plain") e.uwsvd = false;
        else throw ConfigError(where + ": detector '" + item + "' needs mode uwsvd or plain");
        e.max_iters = static_cast<int>(to_int(trim(iters), where));
        out.push_back(e);
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

std::string_view to_string(ChannelKind kind) { return kind == ChannelKind::Elaa ? "elaa" : "iid"; }

ChannelKind parse_channel_kind(std::string_view name) {
    const auto n = lower(std::string(name));
    if (n == "elaa") return ChannelKind::Elaa;
    if (n == "iid") return ChannelKind::Iid;
    throw ConfigError("unknown channel kind '" + std::string(name) + "' (expected elaa or iid)");
}

std::vector<DetectorEntry> default_detectors() {
    std::vector<DetectorEntry> out;
    for (auto m : {Method::JI, Method::GS, Method::SSOR, Method::LBFGS})
        for (bool uw : {false, true}) out.push_back({m, uw, 50});
    return out;
}

double ScenarioConfig::effective_esno_db() const {
    if (esno_db) return *esno_db;
    return channel == ChannelKind::Elaa ? 22.0 : 19.0;
}

void ScenarioConfig::validate() const {
    geometry.validate();
    fading.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    bool square_qam = modulation >= 4;
    for (int q = modulation; square_qam && q > 1; q /= 4) square_qam = q % 4 == 0;
    if (!square_qam) throw ConfigError("modulation must be a power of 4, got " + std::to_string(modulation));
    if (geometry.m < geometry.n()) throw ConfigError("need at least as many service antennas as user antennas");
    for (const auto& d : detectors)
        if (d.max_iters < 1) throw ConfigError("detector max_iters must be >= 1");
}

ScenarioConfig parse_scenario(std::string_view text, const std::string& source) {
    ScenarioConfig c;
    auto& g = c.geometry;
    auto& f = c.fading;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"schema_version",
         [](const std::string& v, const std::string& w) {
             if (to_int(v, w) != kSchemaVersion)
                 throw ConfigError(w + ": unsupported schema_version " + v + " (expected " + std::to_string(kSchemaVersion) + ")");
         }},
        {"channel", [&](const std::string& v, const std::string&) { c.channel = parse_channel_kind(v); }},
        {"antennas", [&](const std::string& v, const std::string& w) { g.m = to_int(v, w); }},
        {"carrier_freq_hz", [&](const std::string& v, const std::string& w) { g.carrier_freq = to_double(v, w); }},
        {"antenna_spacing_m", [&](const std::string& v, const std::string& w) { g.antenna_spacing = to_double(v, w); }},
        {"users", [&](const std::string& v, const std::string& w) { g.k_users = to_int(v, w); }},
        {"antennas_per_user", [&](const std::string& v, const std::string& w) { g.n_per_user = to_int(v, w); }},
        {"user_spacing_m", [&](const std::string& v, const std::string& w) { g.user_spacing = to_double(v, w); }},
        {"standoff_m", [&](const std::string& v, const std::string& w) { g.standoff = to_double(v, w); }},
        {"ut_antenna_spacing_m", [&](const std::string& v, const std::string& w) { g.ut_antenna_spacing = to_double(v, w); }},
        {"beta_nlos", [&](const std::string& v, const std::string& w) { f.beta_nlos = to_double(v, w); }},
        {"gamma_nlos", [&](const std::string& v, const std::string& w) { f.gamma_nlos = to_double(v, w); }},
        {"beta_los", [&](const std::string& v, const std::string& w) { f.beta_los = to_double(v, w); }},
        {"gamma_los", [&](const std::string& v, const std::string& w) { f.gamma_los = to_double(v, w); }},
        {"kappa_mu_db", [&](const std::string& v, const std::string& w) { f.kappa_mu_db = to_double(v, w); }},
        {"kappa_sigma_db", [&](const std::string& v, const std::string& w) { f.kappa_sigma_db = to_double(v, w); }},
        {"los_decay_m", [&](const std::string& v, const std::string& w) { f.los_decay = to_double(v, w); }},
        {"los_fraction", [&](const std::string& v, const std::string& w) { f.los_fraction = to_double(v, w); }},
        {"esno_db", [&](const std::string& v, const std::string& w) { c.esno_db = to_double(v, w); }},
        {"modulation", [&](const std::string& v, const std::string& w) { c.modulation = static_cast<int>(to_int(v, w)); }},
        {"detectors", [&](const std::string& v, const std::string& w) { c.detectors = parse_detectors(v, w); }},
        {"x0",
         [&](const std::string& v, const std::string& w) {
             const auto p = lower(v);
             if (p == "zero") c.x0 = InitPolicy::Zero;
             else if (p == "matched-filter") c.x0 = InitPolicy::MatchedFilter;
             else throw ConfigError(w + ": x0 must be zero or matched-filter");
         }},
        {"trials", [&](const std::string& v, const std::string& w) { c.trials = static_cast<int>(to_int(v, w)); }},
        {"seed", [&](const std::string& v, const std::string& w) { c.master_seed = to_u64(v, w); }},
        {"threads", [&](const std::string& v, const std::string& w) { c.threads = static_cast<int>(to_int(v, w)); }},
    };

    bool saw_version = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(where + ": unknown key '" + key + "'");
        it->second(value, where);
        if (key == "schema_version") saw_version = true;
    }
    if (!saw_version) throw ConfigError(source + ": missing schema_version");
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

std::string to_config_text(const ScenarioConfig& c) {
    const auto& g = c.geometry;
    const auto& f = c.fading;
    std::ostringstream os;
    os << "schema_version = " << kSchemaVersion << '\n'
       << "channel = " << to_string(c.channel) << '\n'
       << "antennas = " << g.m << '\n'
       << "carrier_freq_hz = " << fmt(g.carrier_freq) << '\n'
       << "antenna_spacing_m = " << fmt(g.array_spacing()) << '\n'
       << "users = " << g.k_users << '\n'
       << "antennas_per_user = " << g.n_per_user << '\n'
       << "user_spacing_m = " << fmt(g.user_spacing) << '\n'
       << "standoff_m = " << fmt(g.standoff) << '\n'
       << "ut_antenna_spacing_m = " << fmt(g.terminal_spacing()) << '\n'
       << "beta_nlos = " << fmt(f.beta_nlos) << '\n'
       << "gamma_nlos = " << fmt(f.gamma_nlos) << '\n'
       << "beta_los = " << fmt(f.beta_los) << '\n'
       << "gamma_los = " << fmt(f.gamma_los) << '\n'
       << "kappa_mu_db = " << fmt(f.kappa_mu_db) << '\n'
       << "kappa_sigma_db = " << fmt(f.kappa_sigma_db) << '\n'
       << "los_decay_m = " << fmt(f.los_decay) << '\n'
       << "los_fraction = " << fmt(f.los_fraction) << '\n'
       << "# noise: sigma_z^2 = (||H||_F^2 / M) * 10^(-esno_db/10), per channel draw\n"
       << "esno_db = " << fmt(c.effective_esno_db()) << '\n'
       << "modulation = " << c.modulation << '\n'
       << "detectors = ";
    for (std::size_t i = 0; i < c.detectors.size(); ++i) {
        const auto& d = c.detectors[i];
        os << (i ? ", " : "") << to_string(d.method) << ':' << (d.uwsvd ? "uwsvd" : "plain") << ':' << d.max_iters;
    }
    os << '\n'
       << "x0 = " << (c.x0 == InitPolicy::Zero ? "zero" : "matched-filter") << '\n'
       << "trials = " << c.trials << '\n'
       << "seed = " << c.master_seed << '\n'
       << "threads = " << c.threads << '\n';
    return os.str();
}

}  // namespace elaa
