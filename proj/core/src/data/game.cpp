#include "runline/data/game.hpp"

#include <algorithm>
#include <unordered_set>

#include "runline/error.hpp"

namespace runline {

bool operator==(const GameRecord& a, const GameRecord& b) {
    return a.game_id == b.game_id && a.date == b.date && a.season == b.season &&
           a.home_team == b.home_team && a.away_team == b.away_team &&
           a.home_score == b.home_score && a.away_score == b.away_score &&
           a.is_playoff == b.is_playoff;
}

Dataset Dataset::from_games(std::vector<GameRecord> games, bool exclude_playoffs) {
    if (exclude_playoffs) {
        std::erase_if(games, [](const GameRecord& g) { return g.is_playoff; });
    }
    for (const auto& g : games) {
        if (g.game_id.empty()) {
            throw IngestError("game with empty game_id");
        }
        if (g.home_score < 0 || g.away_score < 0) {
            throw IngestError("game " + g.game_id + ": negative score");
        }
        if (g.home_score == g.away_score) {
            throw IngestError("game " + g.game_id + ": tie score " +
                              std::to_string(g.home_score) + "-" +
                              std::to_string(g.away_score) +
                              " (MLB games cannot tie)");
        }
        if (g.home_team == g.away_team) {
            throw IngestError("game " + g.game_id + ": home and away team are both '" +
                              g.home_team + "'");
        }
        if (!is_valid_date(g.date)) {
            throw IngestError("game " + g.game_id + ": invalid date");
        }
        if (g.season != g.date.year) {
            throw IngestError("game " + g.game_id + ": season " +
                              std::to_string(g.season) + " does not match date " +
                              to_string(g.date));
        }
    }
    std::stable_sort(games.begin(), games.end(),
                     [](const GameRecord& a, const GameRecord& b) {
                         if (a.date != b.date) return a.date < b.date;
                         return a.game_id < b.game_id;
                     });
    std::unordered_set<std::string> seen;
    seen.reserve(games.size());
    Dataset out;
    for (const auto& g : games) {
        if (!seen.insert(g.game_id).second) {
            throw IngestError("duplicate game_id '" + g.game_id + "'");
        }
        out.seasons_.insert(g.season);
    }
    out.games_ = std::move(games);
    return out;
}

int Dataset::min_season() const {
    if (seasons_.empty()) throw Error("empty dataset has no seasons");
    return *seasons_.begin();
}

int Dataset::max_season() const {
    if (seasons_.empty()) throw Error("empty dataset has no seasons");
    return *seasons_.rbegin();
}

SeasonSplit split_by_season(const Dataset& data, int last_train_season) {
    if (data.empty()) {
        throw ConfigError("split_by_season: empty dataset");
    }
    std::vector<GameRecord> train, test;
    for (const auto& g : data.games()) {
        (g.season <= last_train_season ? train : test).push_back(g);
    }
    if (train.empty() || test.empty()) {
        throw ConfigError(
            "split_by_season: last_train_season=" + std::to_string(last_train_season) +
            " leaves " + (train.empty() ? "train" : "test") + " empty (seasons " +
            std::to_string(data.min_season()) + ".." + std::to_string(data.max_season()) +
            ")");
    }
    SeasonSplit split;
    split.train = Dataset::from_games(std::move(train));
    split.test = Dataset::from_games(std::move(test));
    return split;
}

}  // namespace runline
