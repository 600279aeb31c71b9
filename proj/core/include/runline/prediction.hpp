#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace runline {

/// Per-game predicted home-win probabilities for one model over one
/// evaluation set, with the realized labels and score differentials aligned
/// row for row.
struct PredictionSet {
    std::string model_name;
    std::vector<std::string> game_ids;
    std::vector<double> p_home;
    std::vector<std::uint8_t> labels;  // 1 = home win
    std::vector<int> score_diffs;

    std::size_t size() const { return game_ids.size(); }
    bool empty() const { return game_ids.empty(); }

    /// Aligned lengths, probabilities finite in [0,1]. Throws Error.
    void validate() const;
};

/// predictions CSV: game_id,model,p_home,label,score_diff.
void write_predictions_csv(const PredictionSet& preds, const std::string& path);
PredictionSet read_predictions_csv(const std::string& path);

}  // namespace runline
