#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "runline/data/game.hpp"
#include "runline/features/stats_store.hpp"

namespace runline::features {

/// Dense per-game design matrix. Rows align with game_ids; labels and score
/// differentials ride along so downstream analyses never re-join on id.
struct FeatureMatrix {
    std::vector<std::string> game_ids;
    std::vector<int> seasons;
    std::vector<std::string> column_names;
    std::vector<double> values;  // row-major, rows() x cols()
    std::vector<std::uint8_t> labels;  // 1 = home win
    std::vector<int> score_diffs;

    std::size_t rows() const { return game_ids.size(); }
    std::size_t cols() const { return column_names.size(); }

    double at(std::size_t row, std::size_t col) const {
        return values[row * cols() + col];
    }
    const double* row_ptr(std::size_t row) const {
        return values.data() + row * cols();
    }

    /// Checks alignment, finite values, unique column names and nonzero
    /// score differentials. Throws Error on violation.
    void validate() const;

    FeatureMatrix subset(const std::vector<std::size_t>& row_indices) const;
};

/// Rows with season <= last_train_season vs the rest. Throws ConfigError when
/// a side is empty.
std::pair<FeatureMatrix, FeatureMatrix> split_matrix_by_season(
    const FeatureMatrix& matrix, int last_train_season);

/// How one feature column is computed from the stats store.
enum class Transform {
    kPctDiff,     // <stat>pctDiff : pct_diff(home, away)
    kRawDiff,     // <stat>Diff    : home - away
    kOffsetYear,  // <stat>-1      : home team's previous-season value
    kHomeValue,   // <stat>        : home team's current value
    kYear,        // Y
    kMonth,       // M
    kLog5,        // Log5 of both teams' current WP
};

struct ColumnSpec {
    std::string name;  // column label, e.g. "OPSpctDiff"
    Transform transform = Transform::kHomeValue;
    std::string stat;  // base stat name; empty for Y/M/Log5
};

/// Parses one spec token ("OPSpctDiff", "FP-1", "W-L", "Y", ...).
ColumnSpec parse_column_spec(const std::string& token);

/// One column definition per line; '#' starts a comment, blanks are skipped.
std::vector<ColumnSpec> load_feature_spec(const std::string& path);

/// One row per game, columns in spec order. Current-season stats are taken
/// as of the day of the game (strictly earlier snapshots only), so lookahead
/// is impossible by construction. Throws on empty specs, unknown stats and
/// lookahead violations.
FeatureMatrix build_feature_matrix(const Dataset& data, const StatsStore& stats,
                                   const std::vector<ColumnSpec>& spec);

/// features CSV: game_id,season,label,score_diff,<columns...>.
void write_feature_csv(const FeatureMatrix& matrix, const std::string& path);
FeatureMatrix read_feature_csv(const std::string& path);

}  // namespace runline::features
