#include "runline/features/stats_store.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "runline/csv.hpp"
#include "runline/error.hpp"
#include "runline/features/transforms.hpp"
#include "runline/math.hpp"

namespace runline::features {

StatsStore StatsStore::from_rows(std::vector<TeamSeasonStats> rows) {
    StatsStore store;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const TeamSeasonStats& a, const TeamSeasonStats& b) {
                         if (a.team != b.team) return a.team < b.team;
                         if (a.season != b.season) return a.season < b.season;
                         return a.as_of_date < b.as_of_date;
                     });
    store.rows_ = std::move(rows);
    for (std::size_t i = 0; i < store.rows_.size(); ++i) {
        const auto& row = store.rows_[i];
        if (row.team.empty()) throw IngestError("team stats row with empty team code");
        store.index_[{row.team, row.season}].push_back(i);
        for (const auto& [name, value] : row.values) {
            if (!std::isfinite(value)) {
                throw IngestError("non-finite stat " + name + " for " + row.team +
                                  " season " + std::to_string(row.season));
            }
            store.stat_names_.insert(name);
        }
    }
    return store;
}

StatsStore StatsStore::load_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_team = table.column("team");
    const std::size_t c_season = table.column("season");
    const std::size_t c_date = table.column("as_of_date");
    std::vector<TeamSeasonStats> rows;
    rows.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& fields = table.rows[r];
        const std::string where =
            path + " line " + std::to_string(table.line_numbers[r]);
        TeamSeasonStats row;
        row.team = fields[c_team];
        row.season = static_cast<int>(parse_int(fields[c_season], where + " column season"));
        row.as_of_date = parse_date(fields[c_date]);
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (c == c_team || c == c_season || c == c_date) continue;
            if (fields[c].empty()) continue;
            row.values[table.header[c]] =
                parse_double(fields[c], where + " column " + table.header[c]);
        }
        rows.push_back(std::move(row));
    }
    return from_rows(std::move(rows));
}

void StatsStore::save_csv(const std::string& path) const {
    std::vector<std::string> header = {"team", "season", "as_of_date"};
    header.insert(header.end(), stat_names_.begin(), stat_names_.end());
    std::vector<std::vector<std::string>> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
        std::vector<std::string> fields = {row.team, std::to_string(row.season),
                                           to_string(row.as_of_date)};
        for (const auto& stat : stat_names_) {
            auto it = row.values.find(stat);
            fields.push_back(it == row.values.end() ? std::string()
                                                    : format_double(it->second, 6));
        }
        out.push_back(std::move(fields));
    }
    write_csv(path, header, out);
}

bool StatsStore::knows_stat(const std::string& stat) const {
    if (stat_names_.count(stat)) return true;
    // Pythagorean expectation is derivable from runs scored/allowed.
    if (stat == "Pythag" || stat == "TeamPythag") {
        return stat_names_.count("R") && stat_names_.count("RA");
    }
    return false;
}

std::optional<double> StatsStore::raw_value(const TeamSeasonStats& row,
                                            const std::string& stat) const {
    auto it = row.values.find(stat);
    if (it != row.values.end()) return it->second;
    return derived_value(row, stat);
}

std::optional<double> StatsStore::derived_value(const TeamSeasonStats& row,
                                                const std::string& stat) const {
    if (stat == "Pythag" || stat == "TeamPythag") {
        auto rs = row.values.find("R");
        auto ra = row.values.find("RA");
        if (rs != row.values.end() && ra != row.values.end()) {
            return pythagorean(rs->second, ra->second);
        }
    }
    return std::nullopt;
}

const TeamSeasonStats* StatsStore::latest_before(const std::string& team, int season,
                                                 const Date& before) const {
    auto it = index_.find({team, season});
    if (it == index_.end()) return nullptr;
    const TeamSeasonStats* best = nullptr;
    for (std::size_t idx : it->second) {
        const auto& row = rows_[idx];
        if (row.as_of_date < before) best = &row;
    }
    if (best == nullptr) {
        throw Error("lookahead violation: stats for " + team + " season " +
                    std::to_string(season) + " are all dated on or after " +
                    to_string(before));
    }
    return best;
}

const TeamSeasonStats* StatsStore::final_row(const std::string& team,
                                             int season) const {
    auto it = index_.find({team, season});
    if (it == index_.end() || it->second.empty()) return nullptr;
    return &rows_[it->second.back()];
}

std::optional<double> StatsStore::league_mean(int season,
                                              const std::string& stat) const {
    double sum = 0.0;
    int n = 0;
    std::set<std::string> seen;
    for (const auto& [key, indices] : index_) {
        if (key.second != season || indices.empty()) continue;
        if (!seen.insert(key.first).second) continue;
        const auto v = raw_value(rows_[indices.back()], stat);
        if (v) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / n;
}

double StatsStore::prev_season_value(const std::string& team, int season,
                                     const std::string& stat) const {
    if (!knows_stat(stat)) {
        throw ConfigError("unknown stat '" + stat + "'");
    }
    if (const TeamSeasonStats* row = final_row(team, season - 1)) {
        if (const auto v = raw_value(*row, stat)) return *v;
    }
    if (const auto m = league_mean(season - 1, stat)) return *m;
    throw Error("stat '" + stat + "' unavailable for season " +
                std::to_string(season - 1) + " (no team carries it)");
}

double StatsStore::current_value(const std::string& team, int season,
                                 const std::string& stat, const Date& before) const {
    if (!knows_stat(stat)) {
        throw ConfigError("unknown stat '" + stat + "'");
    }
    if (index_.count({team, season})) {
        const TeamSeasonStats* row = latest_before(team, season, before);
        if (const auto v = raw_value(*row, stat)) return *v;
        // Snapshot exists but lacks this stat; fall through to prior season.
    }
    return prev_season_value(team, season, stat);
}

StatsStore synthesize_team_stats(const std::map<std::string, double>& latent,
                                 int first_season, int n_seasons,
                                 std::uint64_t seed) {
    if (latent.empty()) throw ConfigError("synthesize_team_stats: no teams");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    auto jitter = [&](double sd) { return noise(rng) * sd; };

    std::vector<TeamSeasonStats> rows;
    for (int season = first_season - 1; season < first_season + n_seasons; ++season) {
        std::vector<std::pair<double, std::string>> wp_by_team;
        std::vector<TeamSeasonStats> season_rows;
        for (const auto& [team, s] : latent) {
            TeamSeasonStats row;
            row.team = team;
            row.season = season;
            row.as_of_date = Date{season, 3, 31};
            auto& v = row.values;

            const double wp = std::clamp(sigmoid(s) + jitter(0.02), 0.05, 0.95);
            const double runs = 730.0 * (1.0 + 0.25 * s) + jitter(18.0);
            const double runs_allowed = 730.0 * (1.0 - 0.25 * s) + jitter(18.0);
            const double slg = 0.420 + 0.030 * s + jitter(0.006);
            const double avg = 0.260 + 0.015 * s + jitter(0.004);
            const double obp = 0.325 + 0.020 * s + jitter(0.004);

            v["WP"] = wp;
            v["W-L"] = wp / (1.0 - wp);
            v["WD"] = std::round((2.0 * wp - 1.0) * 162.0);
            v["R"] = std::max(400.0, runs);
            v["RA"] = std::max(400.0, runs_allowed);
            v["RD"] = v["R"] - v["RA"];
            v["SLG"] = slg;
            v["AVG"] = avg;
            v["OBP"] = obp;
            v["OPS"] = slg + obp;
            v["ISO"] = std::max(0.05, slg - avg);
            v["FP"] = std::clamp(0.983 + 0.002 * s + jitter(0.001), 0.95, 0.999);
            v["ERA"] = std::max(2.0, 4.30 - 0.55 * s + jitter(0.10));
            v["WHIP"] = std::max(0.9, 1.32 - 0.09 * s + jitter(0.02));
            v["SP-IP"] = std::clamp(5.8 + 0.30 * s + jitter(0.15), 4.0, 7.5);
            v["SP-WPA"] = 0.05 + 0.10 * s + jitter(0.03);
            v["SP-ERA"] = std::max(2.0, 4.20 - 0.60 * s + jitter(0.12));
            v["SP-WHIP"] = std::max(0.9, 1.30 - 0.10 * s + jitter(0.025));
            v["SP-NumG"] = std::round(std::clamp(32.0 + jitter(1.5), 25.0, 35.0));
            v["Bayes"] = std::clamp(sigmoid(s) + jitter(0.03), 0.05, 0.95);
            v["Attend"] = std::max(5000.0, 30000.0 + 9000.0 * s + jitter(1500.0));
            v["ELO"] = 1500.0 + 85.0 * s + jitter(10.0);
            v["Rest"] = std::clamp(1.5 + jitter(0.5), 0.5, 4.0);
            v["PrevWL"] = (std::uniform_real_distribution<double>(0, 1)(rng) < wp) ? 1.0 : 0.0;

            wp_by_team.emplace_back(-wp, team);
            season_rows.push_back(std::move(row));
        }
        std::sort(wp_by_team.begin(), wp_by_team.end());
        std::map<std::string, int> rank;
        for (std::size_t i = 0; i < wp_by_team.size(); ++i) {
            rank[wp_by_team[i].second] = static_cast<int>(i) + 1;
        }
        for (auto& row : season_rows) {
            row.values["Rank"] = rank.at(row.team);
            rows.push_back(std::move(row));
        }
    }
    return StatsStore::from_rows(std::move(rows));
}

}  // namespace runline::features
