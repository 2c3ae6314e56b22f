#include "cli_util.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace laacli {

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const size_t begin = s.find_first_not_of(ws);
    if (begin == std::string::npos) return "";
    const size_t end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_value(int line, const std::string& key, const std::string& value,
                            const char* expected) {
    std::ostringstream msg;
    msg << "line " << line << ": key '" << key << "' expects " << expected << ", got '" << value
        << "'";
    throw ConfigError(msg.str());
}

double parse_double(int line, const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        bad_value(line, key, value, "a number");
    return v;
}

long long parse_integer(int line, const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        bad_value(line, key, value, "an integer");
    return v;
}

unsigned long long parse_unsigned(int line, const std::string& key, const std::string& value) {
    if (!value.empty() && value[0] == '-') bad_value(line, key, value, "a non-negative integer");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        bad_value(line, key, value, "a non-negative integer");
    return v;
}

int parse_bool(int line, const std::string& key, const std::string& value) {
    if (value == "true") return 1;
    if (value == "false") return 0;
    bad_value(line, key, value, "true or false");
}

laacoex_dist* dist_by_name(laacoex_sim_config& cfg, const std::string& name) {
    if (name == "laa_interarrival") return &cfg.laa_interarrival;
    if (name == "wifi_interarrival") return &cfg.wifi_interarrival;
    if (name == "laa_service") return &cfg.laa_service;
    if (name == "wifi_service") return &cfg.wifi_service;
    if (name == "sense_duration") return &cfg.sense_duration;
    if (name == "on_duration") return &cfg.on_duration;
    if (name == "off_duration") return &cfg.off_duration;
    return nullptr;
}

void apply(laacoex_sim_config& cfg, int line, const std::string& key, const std::string& value) {
    laacoex_params& p = cfg.params;
    if (key == "lambda_laa") p.lambda_laa = parse_double(line, key, value);
    else if (key == "lambda_wifi") p.lambda_wifi = parse_double(line, key, value);
    else if (key == "mu_laa") p.mu_laa = parse_double(line, key, value);
    else if (key == "mu_wifi") p.mu_wifi = parse_double(line, key, value);
    else if (key == "mu_sense") p.mu_sense = parse_double(line, key, value);
    else if (key == "mu_on") p.mu_on = parse_double(line, key, value);
    else if (key == "mu_off") p.mu_off = parse_double(line, key, value);
    else if (key == "fast_start_multiplier") p.fast_start_multiplier = parse_double(line, key, value);
    else if (key == "D") p.servers = static_cast<int>(parse_integer(line, key, value));
    else if (key == "Q") p.queue_capacity = static_cast<int>(parse_integer(line, key, value));
    else if (key == "Q_theta") p.queue_threshold = static_cast<int>(parse_integer(line, key, value));
    else if (key == "lbt") p.lbt_enabled = parse_bool(line, key, value);
    else if (key == "buffering") p.buffering_enabled = parse_bool(line, key, value);
    else if (key == "threshold_mode") {
        if (value == "non_strict") p.threshold_mode = LAACOEX_THRESHOLD_NON_STRICT;
        else if (value == "strict") p.threshold_mode = LAACOEX_THRESHOLD_STRICT;
        else bad_value(line, key, value, "non_strict or strict");
    } else if (key == "sessions") cfg.sessions = parse_unsigned(line, key, value);
    else if (key == "seed") cfg.seed = parse_unsigned(line, key, value);
    else if (key == "replications")
        cfg.replications = static_cast<uint32_t>(parse_unsigned(line, key, value));
    else if (key == "fast_start_mode") {
        if (value == "exponential") cfg.fast_start_mode = LAACOEX_FAST_START_EXPONENTIAL;
        else if (value == "immediate") cfg.fast_start_mode = LAACOEX_FAST_START_IMMEDIATE;
        else bad_value(line, key, value, "exponential or immediate");
    } else if (const size_t dot = key.find('.'); dot != std::string::npos) {
        laacoex_dist* dist = dist_by_name(cfg, key.substr(0, dot));
        const std::string field = key.substr(dot + 1);
        if (!dist) throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        if (field == "family") {
            if (value == "exponential") dist->family = LAACOEX_DIST_EXPONENTIAL;
            else if (value == "deterministic") dist->family = LAACOEX_DIST_DETERMINISTIC;
            else if (value == "lognormal") dist->family = LAACOEX_DIST_LOGNORMAL;
            else bad_value(line, key, value, "exponential, deterministic or lognormal");
        } else if (field == "mean") dist->mean = parse_double(line, key, value);
        else if (field == "cv") dist->cv = parse_double(line, key, value);
        else throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    } else {
        throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
}

} // namespace

laacoex_sim_config parse_config(const std::string& text) {
    laacoex_sim_config cfg;
    laacoex_sim_config_init(&cfg);
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string entry = trim(raw);
        if (entry.empty()) continue;
        const size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        apply(cfg, line, key, value);
    }
    return cfg;
}

laacoex_sim_config load_config(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << file.rdbuf();
    return parse_config(text.str());
}

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

const char* scenario_label(const laacoex_params& params) {
    if (params.lbt_enabled && params.buffering_enabled) return "lbt_buffering";
    if (params.lbt_enabled) return "lbt_only";
    if (params.buffering_enabled) return "buffering_only";
    return "baseline";
}

} // namespace laacli
