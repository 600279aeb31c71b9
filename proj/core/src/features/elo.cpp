#include "runline/features/elo.hpp"

#include <cmath>

#include "runline/error.hpp"

namespace runline::features {

double EloState::rating(const std::string& team) const {
    auto it = ratings.find(team);
    if (it == ratings.end()) {
        throw ConfigError("elo: unknown team '" + team + "'");
    }
    return it->second;
}

double elo_expected_home(const EloState& state, const std::string& home_team,
                         const std::string& away_team, double travel_km,
                         double rest_days_home, double rest_days_away) {
    const double r_home = state.rating(home_team);
    const double r_away = state.rating(away_team);
    const double adj = state.home_advantage_points +
                       state.rest_coeff * (rest_days_home - rest_days_away) -
                       state.travel_coeff * (travel_km / 1000.0);
    return 1.0 / (1.0 + std::pow(10.0, (r_away - r_home - adj) / 400.0));
}

EloState elo_update(EloState state, const GameRecord& game, double travel_km,
                    double rest_days_home, double rest_days_away) {
    const double expected = elo_expected_home(state, game.home_team, game.away_team,
                                              travel_km, rest_days_home, rest_days_away);
    const double actual = game.home_win() ? 1.0 : 0.0;
    const double delta = state.k_factor * (actual - expected);
    state.ratings[game.home_team] += delta;
    state.ratings[game.away_team] -= delta;
    return state;
}

}  // namespace runline::features
