#pragma once

#include <string>

#include "runline/data/game.hpp"

namespace runline {

/// Reads the games CSV schema:
///   game_id,date,season,home_team,away_team,home_score,away_score,is_playoff
/// with date = YYYY-MM-DD and is_playoff in {0,1}. Malformed rows throw
/// IngestError naming the line and column; ties and duplicate game_ids are
/// rejected with the offending game_id.
Dataset ingest_games(const std::string& path, bool exclude_playoffs = false);

/// Writes a dataset back out in the same schema (round-trips exactly).
void write_games_csv(const Dataset& data, const std::string& path);

}  // namespace runline
