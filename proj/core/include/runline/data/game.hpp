#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "runline/date.hpp"

namespace runline {

/// One regular-season (or playoff) game with final scores.
struct GameRecord {
    std::string game_id;
    Date date;
    int season = 0;  // calendar year of `date`
    std::string home_team;
    std::string away_team;
    int home_score = 0;
    int away_score = 0;
    bool is_playoff = false;

    bool home_win() const { return home_score > away_score; }
    int score_diff() const { return home_score - away_score; }
};

/// Immutable, date-ordered game collection. Construction validates every
/// record; after that the object is safe to share across threads.
class Dataset {
public:
    Dataset() = default;

    /// Sorts by (date, game_id) and enforces the record invariants:
    /// no ties, distinct teams, non-negative scores, unique game_ids,
    /// season == year(date). `exclude_playoffs` drops playoff rows first.
    static Dataset from_games(std::vector<GameRecord> games,
                              bool exclude_playoffs = false);

    const std::vector<GameRecord>& games() const { return games_; }
    std::size_t size() const { return games_.size(); }
    bool empty() const { return games_.empty(); }

    const std::set<int>& seasons() const { return seasons_; }
    int min_season() const;
    int max_season() const;

private:
    std::vector<GameRecord> games_;
    std::set<int> seasons_;
};

/// Temporal train/test partition: every train season precedes every test
/// season and no season appears on both sides.
struct SeasonSplit {
    Dataset train;
    Dataset test;
};

/// train = seasons <= last_train_season, test = the rest. Throws ConfigError
/// when either side would be empty.
SeasonSplit split_by_season(const Dataset& data, int last_train_season);

bool operator==(const GameRecord& a, const GameRecord& b);

}  // namespace runline
