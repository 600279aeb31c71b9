#include "runline/pipeline/config.hpp"

#include <fstream>
#include <sstream>

#include "runline/csv.hpp"
#include "runline/error.hpp"

namespace runline::pipeline {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text,
                                    const std::string& origin) {
    ConfigFile config;
    config.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError(origin + " line " + std::to_string(line_no) +
                                  ": malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            config.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + " line " + std::to_string(line_no) +
                              ": expected key = value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + " line " + std::to_string(line_no) +
                              ": empty key");
        }
        config.sections_[section][key] = value;
    }
    return config;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s != sections_.end()) {
        auto k = s->second.find(key);
        if (k != s->second.end()) return k->second;
    }
    throw ConfigError(origin_ + ": missing required key " + section + "." + key);
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    if (!has(section, key)) return fallback;
    return parse_double(get(section, key), origin_ + ": " + section + "." + key);
}

long long ConfigFile::get_int(const std::string& section, const std::string& key,
                              long long fallback) const {
    if (!has(section, key)) return fallback;
    return parse_int(get(section, key), origin_ + ": " + section + "." + key);
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError(origin_ + ": " + section + "." + key +
                      " must be a boolean, got '" + v + "'");
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
    sections_[section][key] = value;
}

std::map<std::string, std::string> ConfigFile::with_prefix(
    const std::string& section, const std::string& prefix) const {
    std::map<std::string, std::string> out;
    auto s = sections_.find(section);
    if (s == sections_.end()) return out;
    for (const auto& [key, value] : s->second) {
        if (key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0) {
            out.emplace(key.substr(prefix.size()), value);
        }
    }
    return out;
}

std::string reference_config_text() {
    return R"(# runline-lab demo pipeline: fully synthetic, seeded, desk-scale.
# Every stochastic stage takes an explicit seed; rerunning this config
# produces a byte-identical output tree.

[data]
source = synth              # synth | csv (csv needs data.games = <path>)
exclude_playoffs = 1

[synth]
teams = 12
seasons = 8
games_per_team = 60
first_season = 2001
home_advantage = 0.124      # log-odds, ~53.1% home wins
strength_spread = 0.45
run_scale = 0.7
seed = 42

[features]
spec = demo                 # demo | paper | <path to spec file>
stats = synth               # synth | <path to team-stats CSV>
stats_seed = 11

[split]
last_train_season = 2006

[models]
train = homewin,logr,knn,gbdt,ann,elo
seed = 7
threshold = 0.5
# Per-family hyperparameters use <family>.<param> keys, e.g.:
knn.k = 150
gbdt.rounds = 120
ann.epochs = 40
logr.epochs = 400

[betting]
enabled = 1
model = logr                # prediction set the bets follow
odds = synth                # synth | <path to odds CSV>
vig = 0.045
stake = 1.0
grid_low = 20
grid_high = 20
jobs = 1
)";
}

}  // namespace runline::pipeline
