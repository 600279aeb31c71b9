#include "runline/models/grid_search.hpp"

#include <cmath>
#include <limits>

#include "runline/error.hpp"
#include "runline/metrics/metrics.hpp"

namespace runline::models {

GridSearchResult grid_search(const std::string& family,
                             const std::vector<HyperParams>& grid,
                             const FeatureMatrix& train_matrix,
                             int validation_boundary_season, std::uint64_t seed) {
    if (grid.empty()) throw ConfigError("grid_search: empty grid");
    if (!is_matrix_family(family)) {
        throw ConfigError("grid_search: '" + family +
                          "' is not a feature-matrix model family");
    }
    auto [fit_part, val_part] =
        features::split_matrix_by_season(train_matrix, validation_boundary_season);

    GridSearchResult result;
    result.grid = grid;
    result.scores.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    result.failed.assign(grid.size(), false);
    result.messages.assign(grid.size(), "");

    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best = grid.size();
    for (std::size_t cell = 0; cell < grid.size(); ++cell) {
        try {
            auto model = make_classifier(family, grid[cell], seed);
            model->fit(fit_part);
            const PredictionSet preds = model->predict_set(val_part);
            const double score = metrics::log_loss(preds);
            result.scores[cell] = score;
            if (score < best_score) {  // strict: ties keep the earlier cell
                best_score = score;
                best = cell;
            }
        } catch (const std::exception& e) {
            result.failed[cell] = true;
            result.messages[cell] = e.what();
        }
    }
    if (best == grid.size()) {
        throw Error("grid_search: every cell failed to fit; first error: " +
                    result.messages.front());
    }
    result.best_index = best;
    return result;
}

}  // namespace runline::models
