#include "runline/models/homewin.hpp"

namespace runline::models {

PredictionSet homewin_predict(const Dataset& games) {
    PredictionSet out;
    out.model_name = "homewin";
    out.game_ids.reserve(games.size());
    for (const auto& g : games.games()) {
        out.game_ids.push_back(g.game_id);
        out.p_home.push_back(1.0);
        out.labels.push_back(g.home_win() ? 1 : 0);
        out.score_diffs.push_back(g.score_diff());
    }
    out.validate();
    return out;
}

}  // namespace runline::models
