#include "runline/models/elo_model.hpp"

#include <algorithm>
#include <map>

#include "runline/error.hpp"

namespace runline::models {

namespace {

features::EloState make_state(const EloModelConfig& config) {
    features::EloState state;
    state.k_factor = config.k_factor;
    state.home_advantage_points = config.home_advantage_points;
    state.travel_coeff = config.travel_coeff;
    state.rest_coeff = config.rest_coeff;
    return state;
}

struct Walker {
    const EloModelConfig& config;
    features::EloState state;
    std::map<std::string, Date> last_played;
    Date previous_date{1, 1, 1};

    explicit Walker(const EloModelConfig& c) : config(c), state(make_state(c)) {}

    double rest_days(const std::string& team, const Date& when) const {
        auto it = last_played.find(team);
        if (it == last_played.end()) return config.default_rest_days;
        return std::min(static_cast<double>(days_between(it->second, when)),
                        config.max_rest_days);
    }

    // Returns the pre-update expected home score, then applies the update.
    double step(const GameRecord& game) {
        if (game.date < previous_date) {
            throw Error("elo: games out of date order at " + game.game_id);
        }
        previous_date = game.date;
        state.ratings.try_emplace(game.home_team, config.initial_rating);
        state.ratings.try_emplace(game.away_team, config.initial_rating);
        double rest_home = 0.0, rest_away = 0.0;
        if (config.use_rest) {
            rest_home = rest_days(game.home_team, game.date);
            rest_away = rest_days(game.away_team, game.date);
        }
        const double expected = features::elo_expected_home(
            state, game.home_team, game.away_team, /*travel_km=*/0.0, rest_home,
            rest_away);
        state = features::elo_update(std::move(state), game, 0.0, rest_home, rest_away);
        if (config.use_rest) {
            last_played[game.home_team] = game.date;
            last_played[game.away_team] = game.date;
        }
        return expected;
    }
};

}  // namespace

PredictionSet elo_model_predict(const Dataset& games, int last_train_season,
                                const EloModelConfig& config) {
    if (games.empty()) throw ConfigError("elo: empty dataset");
    Walker walker(config);
    PredictionSet out;
    out.model_name = "elo";
    for (const auto& game : games.games()) {
        const double expected = walker.step(game);
        if (game.season > last_train_season) {
            out.game_ids.push_back(game.game_id);
            out.p_home.push_back(expected);
            out.labels.push_back(game.home_win() ? 1 : 0);
            out.score_diffs.push_back(game.score_diff());
        }
    }
    if (out.empty()) {
        throw ConfigError("elo: no games after season " +
                          std::to_string(last_train_season));
    }
    out.validate();
    return out;
}

features::EloState elo_final_state(const Dataset& games, const EloModelConfig& config) {
    Walker walker(config);
    for (const auto& game : games.games()) walker.step(game);
    return walker.state;
}

}  // namespace runline::models
