#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "runline/date.hpp"

namespace runline::features {

/// One snapshot of a team's season statistics, valid as of `as_of_date`.
/// A (team, season) pair may have several snapshots; lookups pick the latest
/// one dated strictly before the game so no lookahead can occur.
struct TeamSeasonStats {
    std::string team;
    int season = 0;
    Date as_of_date;
    std::map<std::string, double> values;
};

/// Immutable store of team-season statistics with the fallback rules the
/// feature builder relies on:
///   current value : latest snapshot before the game date; a snapshot that
///                   exists only on/after the game date is a lookahead error.
///   missing team  : previous-season final value, then league mean.
///   "Pythag"      : derived from R and RA when not stored directly.
class StatsStore {
public:
    StatsStore() = default;

    static StatsStore from_rows(std::vector<TeamSeasonStats> rows);

    /// team-stats CSV: team,season,as_of_date,<stat columns...>. Empty cells
    /// mean "stat absent in this snapshot".
    static StatsStore load_csv(const std::string& path);
    void save_csv(const std::string& path) const;

    bool knows_stat(const std::string& stat) const;
    const std::set<std::string>& stat_names() const { return stat_names_; }

    /// Value of `stat` for (team, season) usable before `before`. Applies the
    /// fallback chain above; throws on lookahead or unknown stat.
    double current_value(const std::string& team, int season,
                         const std::string& stat, const Date& before) const;

    /// Previous-season final value, or the league mean of season-1 when the
    /// team has no prior season (expansion teams). Unknown stats throw.
    double prev_season_value(const std::string& team, int season,
                             const std::string& stat) const;

    /// Mean of each team's final value of `stat` in `season`; nullopt when no
    /// team carries the stat that season.
    std::optional<double> league_mean(int season, const std::string& stat) const;

    std::size_t size() const { return rows_.size(); }
    const std::vector<TeamSeasonStats>& rows() const { return rows_; }

private:
    std::optional<double> raw_value(const TeamSeasonStats& row,
                                    const std::string& stat) const;
    const TeamSeasonStats* latest_before(const std::string& team, int season,
                                         const Date& before) const;
    const TeamSeasonStats* final_row(const std::string& team, int season) const;
    std::optional<double> derived_value(const TeamSeasonStats& row,
                                        const std::string& stat) const;

    std::vector<TeamSeasonStats> rows_;
    // (team, season) -> indices into rows_, ascending as_of_date.
    std::map<std::pair<std::string, int>, std::vector<std::size_t>> index_;
    std::set<std::string> stat_names_;
};

/// Table-2-style team statistics for synthetic seasons, correlated with the
/// latent strengths so fitted models have signal to find. Seasons covered:
/// first_season-1 .. first_season+n_seasons-1 (the extra leading season feeds
/// the Offset-1-yr columns). Deterministic under `seed`.
StatsStore synthesize_team_stats(const std::map<std::string, double>& latent,
                                 int first_season, int n_seasons,
                                 std::uint64_t seed);

}  // namespace runline::features
