#pragma once

#include <string>
#include <vector>

#include "runline/models/factory.hpp"

namespace runline::models {

struct GridSearchResult {
    std::vector<HyperParams> grid;
    std::vector<double> scores;          // validation log-loss; NaN for failed cells
    std::vector<bool> failed;
    std::vector<std::string> messages;   // failure diagnostics, empty otherwise
    std::size_t best_index = 0;
    std::string metric = "log_loss";
};

/// Season-respecting hyperparameter search: each cell fits on rows with
/// season <= validation_boundary_season and scores on the later rows, so a
/// later season can never train a model validated on an earlier one. Cells
/// that fail to fit are recorded and excluded from `best`. Ties go to the
/// earlier cell; order grids simplest-first so ties resolve toward the
/// simpler model.
GridSearchResult grid_search(const std::string& family,
                             const std::vector<HyperParams>& grid,
                             const FeatureMatrix& train_matrix,
                             int validation_boundary_season,
                             std::uint64_t seed = 0);

}  // namespace runline::models
