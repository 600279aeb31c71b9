#include "runline/features/feature_matrix.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "runline/csv.hpp"
#include "runline/error.hpp"
#include "runline/features/transforms.hpp"

namespace runline::features {

void FeatureMatrix::validate() const {
    const std::size_t n = rows();
    if (seasons.size() != n || labels.size() != n || score_diffs.size() != n) {
        throw Error("feature matrix: misaligned row metadata");
    }
    if (values.size() != n * cols()) {
        throw Error("feature matrix: value buffer has wrong size");
    }
    std::set<std::string> names(column_names.begin(), column_names.end());
    if (names.size() != column_names.size()) {
        throw Error("feature matrix: duplicate column names");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw Error("feature matrix: non-finite value");
    }
    for (int d : score_diffs) {
        if (d == 0) throw Error("feature matrix: zero score differential");
    }
}

FeatureMatrix FeatureMatrix::subset(const std::vector<std::size_t>& row_indices) const {
    FeatureMatrix out;
    out.column_names = column_names;
    out.game_ids.reserve(row_indices.size());
    out.values.reserve(row_indices.size() * cols());
    for (std::size_t r : row_indices) {
        if (r >= rows()) throw Error("feature matrix subset: row out of range");
        out.game_ids.push_back(game_ids[r]);
        out.seasons.push_back(seasons[r]);
        out.labels.push_back(labels[r]);
        out.score_diffs.push_back(score_diffs[r]);
        out.values.insert(out.values.end(), row_ptr(r), row_ptr(r) + cols());
    }
    return out;
}

std::pair<FeatureMatrix, FeatureMatrix> split_matrix_by_season(
    const FeatureMatrix& matrix, int last_train_season) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        (matrix.seasons[r] <= last_train_season ? train_rows : test_rows).push_back(r);
    }
    if (train_rows.empty() || test_rows.empty()) {
        throw ConfigError("matrix split at season " + std::to_string(last_train_season) +
                          " leaves " + (train_rows.empty() ? "train" : "test") + " empty");
    }
    return {matrix.subset(train_rows), matrix.subset(test_rows)};
}

ColumnSpec parse_column_spec(const std::string& token) {
    if (token.empty()) throw ConfigError("empty feature column definition");
    ColumnSpec spec;
    spec.name = token;
    if (token == "Y") {
        spec.transform = Transform::kYear;
    } else if (token == "M") {
        spec.transform = Transform::kMonth;
    } else if (token == "Log5") {
        spec.transform = Transform::kLog5;
    } else if (token.size() > 7 && token.ends_with("pctDiff")) {
        spec.transform = Transform::kPctDiff;
        spec.stat = token.substr(0, token.size() - 7);
    } else if (token.size() > 4 && token.ends_with("Diff")) {
        spec.transform = Transform::kRawDiff;
        spec.stat = token.substr(0, token.size() - 4);
    } else if (token.size() > 2 && token.ends_with("-1")) {
        spec.transform = Transform::kOffsetYear;
        spec.stat = token.substr(0, token.size() - 2);
    } else {
        spec.transform = Transform::kHomeValue;
        spec.stat = token;
    }
    return spec;
}

std::vector<ColumnSpec> load_feature_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open feature spec '" + path + "'");
    std::vector<ColumnSpec> spec;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t");
        spec.push_back(parse_column_spec(line.substr(first, last - first + 1)));
    }
    return spec;
}

namespace {

double column_value(const ColumnSpec& spec, const GameRecord& game,
                    const StatsStore& stats) {
    switch (spec.transform) {
        case Transform::kYear:
            return game.season;
        case Transform::kMonth:
            return game.date.month;
        case Transform::kLog5: {
            const double wp_home =
                stats.current_value(game.home_team, game.season, "WP", game.date);
            const double wp_away =
                stats.current_value(game.away_team, game.season, "WP", game.date);
            return log5(std::clamp(wp_home, 0.01, 0.99), std::clamp(wp_away, 0.01, 0.99));
        }
        case Transform::kPctDiff:
            return pct_diff(
                stats.current_value(game.home_team, game.season, spec.stat, game.date),
                stats.current_value(game.away_team, game.season, spec.stat, game.date));
        case Transform::kRawDiff:
            return raw_diff(
                stats.current_value(game.home_team, game.season, spec.stat, game.date),
                stats.current_value(game.away_team, game.season, spec.stat, game.date));
        case Transform::kOffsetYear:
            return stats.prev_season_value(game.home_team, game.season, spec.stat);
        case Transform::kHomeValue:
            return stats.current_value(game.home_team, game.season, spec.stat, game.date);
    }
    throw Error("unreachable transform");
}

}  // namespace

FeatureMatrix build_feature_matrix(const Dataset& data, const StatsStore& stats,
                                   const std::vector<ColumnSpec>& spec) {
    if (spec.empty()) {
        throw ConfigError("feature spec is empty: models need at least one column");
    }
    if (data.empty()) {
        throw ConfigError("cannot build features for an empty dataset");
    }
    FeatureMatrix matrix;
    for (const auto& col : spec) matrix.column_names.push_back(col.name);
    matrix.game_ids.reserve(data.size());
    matrix.values.reserve(data.size() * spec.size());
    for (const auto& game : data.games()) {
        matrix.game_ids.push_back(game.game_id);
        matrix.seasons.push_back(game.season);
        matrix.labels.push_back(game.home_win() ? 1 : 0);
        matrix.score_diffs.push_back(game.score_diff());
        for (const auto& col : spec) {
            double v;
            try {
                v = column_value(col, game, stats);
            } catch (const Error& e) {
                throw Error("column " + col.name + ", game " + game.game_id + ": " +
                            e.what());
            }
            if (!std::isfinite(v)) {
                throw Error("column " + col.name + ", game " + game.game_id +
                            ": non-finite value");
            }
            matrix.values.push_back(v);
        }
    }
    matrix.validate();
    return matrix;
}

void write_feature_csv(const FeatureMatrix& matrix, const std::string& path) {
    std::vector<std::string> header = {"game_id", "season", "label", "score_diff"};
    header.insert(header.end(), matrix.column_names.begin(), matrix.column_names.end());
    std::vector<std::vector<std::string>> rows;
    rows.reserve(matrix.rows());
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        std::vector<std::string> fields = {
            matrix.game_ids[r], std::to_string(matrix.seasons[r]),
            matrix.labels[r] ? "1" : "0", std::to_string(matrix.score_diffs[r])};
        for (std::size_t c = 0; c < matrix.cols(); ++c) {
            fields.push_back(format_double(matrix.at(r, c), 9));
        }
        rows.push_back(std::move(fields));
    }
    write_csv(path, header, rows);
}

FeatureMatrix read_feature_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_id = table.column("game_id");
    const std::size_t c_season = table.column("season");
    const std::size_t c_label = table.column("label");
    const std::size_t c_diff = table.column("score_diff");
    FeatureMatrix matrix;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c == c_id || c == c_season || c == c_label || c == c_diff) continue;
        matrix.column_names.push_back(table.header[c]);
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& fields = table.rows[r];
        const std::string where =
            path + " line " + std::to_string(table.line_numbers[r]);
        matrix.game_ids.push_back(fields[c_id]);
        matrix.seasons.push_back(
            static_cast<int>(parse_int(fields[c_season], where + " column season")));
        const long long label = parse_int(fields[c_label], where + " column label");
        if (label != 0 && label != 1) {
            throw IngestError(where + ": label must be 0 or 1");
        }
        matrix.labels.push_back(static_cast<std::uint8_t>(label));
        matrix.score_diffs.push_back(
            static_cast<int>(parse_int(fields[c_diff], where + " column score_diff")));
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (c == c_id || c == c_season || c == c_label || c == c_diff) continue;
            matrix.values.push_back(
                parse_double(fields[c], where + " column " + table.header[c]));
        }
    }
    matrix.validate();
    return matrix;
}

}  // namespace runline::features
