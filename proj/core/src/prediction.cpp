#include "runline/prediction.hpp"

#include <cmath>

#include "runline/csv.hpp"
#include "runline/error.hpp"

namespace runline {

void PredictionSet::validate() const {
    const std::size_t n = size();
    if (p_home.size() != n || labels.size() != n || score_diffs.size() != n) {
        throw Error("prediction set '" + model_name + "': misaligned columns");
    }
    for (double p : p_home) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
            throw Error("prediction set '" + model_name +
                        "': probability outside [0,1]");
        }
    }
    for (std::uint8_t y : labels) {
        if (y > 1) throw Error("prediction set '" + model_name + "': label not 0/1");
    }
}

void write_predictions_csv(const PredictionSet& preds, const std::string& path) {
    preds.validate();
    std::vector<std::vector<std::string>> rows;
    rows.reserve(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        rows.push_back({preds.game_ids[i], preds.model_name,
                        format_double(preds.p_home[i], 9),
                        preds.labels[i] ? "1" : "0",
                        std::to_string(preds.score_diffs[i])});
    }
    write_csv(path, {"game_id", "model", "p_home", "label", "score_diff"}, rows);
}

PredictionSet read_predictions_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_id = table.column("game_id");
    const std::size_t c_model = table.column("model");
    const std::size_t c_p = table.column("p_home");
    const std::size_t c_label = table.column("label");
    const std::size_t c_diff = table.column("score_diff");
    PredictionSet preds;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& fields = table.rows[r];
        const std::string where =
            path + " line " + std::to_string(table.line_numbers[r]);
        if (r == 0) {
            preds.model_name = fields[c_model];
        } else if (fields[c_model] != preds.model_name) {
            throw IngestError(where + ": mixed model names in one prediction file ('" +
                              preds.model_name + "' vs '" + fields[c_model] + "')");
        }
        preds.game_ids.push_back(fields[c_id]);
        preds.p_home.push_back(parse_double(fields[c_p], where + " column p_home"));
        const long long label = parse_int(fields[c_label], where + " column label");
        if (label != 0 && label != 1) throw IngestError(where + ": label must be 0 or 1");
        preds.labels.push_back(static_cast<std::uint8_t>(label));
        preds.score_diffs.push_back(
            static_cast<int>(parse_int(fields[c_diff], where + " column score_diff")));
    }
    preds.validate();
    return preds;
}

}  // namespace runline
