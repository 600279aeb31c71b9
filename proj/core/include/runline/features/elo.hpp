#pragma once

#include <map>
#include <string>

#include "runline/data/game.hpp"

namespace runline::features {

/// Elo ratings plus the linear adjustment coefficients. Home advantage is
/// worth 24 rating points by default; travel and rest enter as linear terms.
struct EloState {
    std::map<std::string, double> ratings;
    double k_factor = 4.0;
    double home_advantage_points = 24.0;
    double travel_coeff = 1.0;   // points per 1000 km travelled by the home side
    double rest_coeff = 2.3;     // points per day of rest difference

    double rating(const std::string& team) const;
};

/// Pre-game expected home score
///   E = 1 / (1 + 10^((R_away - R_home - adj) / 400))
/// with adj = home_advantage + rest_coeff*(rest_home - rest_away)
///            - travel_coeff * travel_km/1000.
double elo_expected_home(const EloState& state, const std::string& home_team,
                         const std::string& away_team, double travel_km = 0.0,
                         double rest_days_home = 0.0, double rest_days_away = 0.0);

/// Zero-sum post-game update: R_home += k*(S - E), R_away -= k*(S - E) with
/// S = 1 when the home side won. Throws on teams missing from the ratings.
EloState elo_update(EloState state, const GameRecord& game, double travel_km = 0.0,
                    double rest_days_home = 0.0, double rest_days_away = 0.0);

}  // namespace runline::features
