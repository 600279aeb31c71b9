#pragma once

#include "runline/data/game.hpp"
#include "runline/features/elo.hpp"
#include "runline/prediction.hpp"

namespace runline::models {

/// Elo-based predictor configuration. Unlike the other families this model
/// consumes game records directly: ratings evolve through every game in date
/// order and only games after the training boundary are scored.
struct EloModelConfig {
    double k_factor = 4.0;
    double home_advantage_points = 24.0;
    double travel_coeff = 1.0;
    double rest_coeff = 2.3;
    double initial_rating = 1500.0;
    bool use_rest = false;        // derive rest days from schedule gaps
    double default_rest_days = 3.0;
    double max_rest_days = 10.0;
};

/// Walks the full dataset in date order, warming ratings on games with
/// season <= last_train_season and recording the pre-update expected score
/// as p_home for every later game. Pass last_train_season < min season to
/// score every game. Throws on out-of-order dates.
PredictionSet elo_model_predict(const Dataset& games, int last_train_season,
                                const EloModelConfig& config = {});

/// Final ratings after walking every game (diagnostics / reporting).
features::EloState elo_final_state(const Dataset& games,
                                   const EloModelConfig& config = {});

}  // namespace runline::models
