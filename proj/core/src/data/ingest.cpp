#include "runline/data/ingest.hpp"

#include "runline/csv.hpp"
#include "runline/error.hpp"

namespace runline {

namespace {

int parse_score(const std::string& field, const std::string& where) {
    const long long v = parse_int(field, where);
    if (v < 0 || v > 1000) {
        throw IngestError(where + ": score " + field + " out of range");
    }
    return static_cast<int>(v);
}

}  // namespace

Dataset ingest_games(const std::string& path, bool exclude_playoffs) {
    const CsvTable table = read_csv(path);
    const std::size_t c_id = table.column("game_id");
    const std::size_t c_date = table.column("date");
    const std::size_t c_season = table.column("season");
    const std::size_t c_home = table.column("home_team");
    const std::size_t c_away = table.column("away_team");
    const std::size_t c_hs = table.column("home_score");
    const std::size_t c_as = table.column("away_score");
    const std::size_t c_po = table.column("is_playoff");

    std::vector<GameRecord> games;
    games.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where =
            path + " line " + std::to_string(table.line_numbers[r]);
        GameRecord g;
        g.game_id = row[c_id];
        if (g.game_id.empty()) {
            throw IngestError(where + " column game_id: empty");
        }
        try {
            g.date = parse_date(row[c_date]);
        } catch (const IngestError& e) {
            throw IngestError(where + " column date: " + e.what());
        }
        g.season = static_cast<int>(parse_int(row[c_season], where + " column season"));
        g.home_team = row[c_home];
        g.away_team = row[c_away];
        if (g.home_team.empty() || g.away_team.empty()) {
            throw IngestError(where + ": empty team code");
        }
        g.home_score = parse_score(row[c_hs], where + " column home_score");
        g.away_score = parse_score(row[c_as], where + " column away_score");
        if (row[c_po] == "0") {
            g.is_playoff = false;
        } else if (row[c_po] == "1") {
            g.is_playoff = true;
        } else {
            throw IngestError(where + " column is_playoff: '" + row[c_po] +
                              "' is not 0 or 1");
        }
        games.push_back(std::move(g));
    }
    return Dataset::from_games(std::move(games), exclude_playoffs);
}

void write_games_csv(const Dataset& data, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(data.size());
    for (const auto& g : data.games()) {
        rows.push_back({g.game_id, to_string(g.date), std::to_string(g.season),
                        g.home_team, g.away_team, std::to_string(g.home_score),
                        std::to_string(g.away_score), g.is_playoff ? "1" : "0"});
    }
    write_csv(path,
              {"game_id", "date", "season", "home_team", "away_team", "home_score",
               "away_score", "is_playoff"},
              rows);
}

}  // namespace runline
