#include "runline/betting/betting.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "runline/csv.hpp"
#include "runline/data/synthetic.hpp"
#include "runline/error.hpp"
#include "runline/math.hpp"

namespace runline::betting {

void RunLineQuote::validate() const {
    if (game_id.empty()) throw IngestError("quote with empty game_id");
    if (home_odds == 0 || away_odds == 0 || std::abs(home_odds) < 100 ||
        std::abs(away_odds) < 100) {
        throw IngestError("quote " + game_id + ": American odds must satisfy |odds| >= 100");
    }
    if (away_line != -home_line) {
        throw IngestError("quote " + game_id + ": away_line must equal -home_line");
    }
}

QuoteStore::QuoteStore(std::vector<RunLineQuote> quotes) {
    for (auto& q : quotes) {
        q.validate();
        const std::string id = q.game_id;
        if (!quotes_.emplace(id, std::move(q)).second) {
            throw IngestError("duplicate quote for game '" + id + "'");
        }
    }
}

QuoteStore QuoteStore::load_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_id = table.column("game_id");
    const std::size_t c_hl = table.column("home_line");
    const std::size_t c_ho = table.column("home_odds");
    const std::size_t c_al = table.column("away_line");
    const std::size_t c_ao = table.column("away_odds");
    std::vector<RunLineQuote> quotes;
    quotes.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& fields = table.rows[r];
        const std::string where =
            path + " line " + std::to_string(table.line_numbers[r]);
        RunLineQuote q;
        q.game_id = fields[c_id];
        q.home_line = parse_double(fields[c_hl], where + " column home_line");
        q.home_odds = static_cast<int>(parse_int(fields[c_ho], where + " column home_odds"));
        q.away_line = parse_double(fields[c_al], where + " column away_line");
        q.away_odds = static_cast<int>(parse_int(fields[c_ao], where + " column away_odds"));
        quotes.push_back(std::move(q));
    }
    return QuoteStore(std::move(quotes));
}

void QuoteStore::save_csv(const std::string& path) const {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(quotes_.size());
    for (const auto& [id, q] : quotes_) {
        rows.push_back({id, format_double(q.home_line, 1), std::to_string(q.home_odds),
                        format_double(q.away_line, 1), std::to_string(q.away_odds)});
    }
    write_csv(path, {"game_id", "home_line", "home_odds", "away_line", "away_odds"},
              rows);
}

const RunLineQuote& QuoteStore::at(const std::string& game_id) const {
    auto it = quotes_.find(game_id);
    if (it == quotes_.end()) {
        throw Error("no run-line quote for game '" + game_id + "'");
    }
    return it->second;
}

bool QuoteStore::contains(const std::string& game_id) const {
    return quotes_.count(game_id) > 0;
}

double payout_ratio(int odds) {
    if (std::abs(odds) < 100) {
        throw ConfigError("American odds must satisfy |odds| >= 100, got " +
                          std::to_string(odds));
    }
    return odds > 0 ? static_cast<double>(odds) / 100.0
                    : 100.0 / static_cast<double>(-odds);
}

double implied_probability(int odds) {
    return 1.0 / (1.0 + payout_ratio(odds));
}

BetOutcome settle_margin(const RunLineQuote& quote, int home_margin, Side side,
                         double stake) {
    if (side == Side::kAbstain) {
        return {quote.game_id, Side::kAbstain, 0.0, 0.0};
    }
    if (!(stake > 0.0)) {
        throw ConfigError("settle: stake must be positive");
    }
    const double edge = side == Side::kHome
                            ? static_cast<double>(home_margin) + quote.home_line
                            : static_cast<double>(-home_margin) + quote.away_line;
    BetOutcome outcome{quote.game_id, side, stake, 0.0};
    if (edge > 0.0) {
        outcome.profit =
            stake * payout_ratio(side == Side::kHome ? quote.home_odds : quote.away_odds);
    } else if (edge < 0.0) {
        outcome.profit = -stake;
    }  // edge == 0: push, stake returned
    return outcome;
}

BetOutcome settle(const RunLineQuote& quote, const GameRecord& game, Side side,
                  double stake) {
    if (quote.game_id != game.game_id) {
        throw ConfigError("settle: quote is for game '" + quote.game_id +
                          "' but the record is '" + game.game_id + "'");
    }
    return settle_margin(quote, game.score_diff(), side, stake);
}

namespace {

BacktestSummary run_backtest(const PredictionSet& preds, const QuoteStore& quotes,
                             double low, double high, double stake,
                             bool keep_outcomes) {
    if (preds.empty()) throw ConfigError("backtest: empty prediction set");
    if (!(stake > 0.0)) throw ConfigError("backtest: stake must be positive");
    BacktestSummary summary;
    if (keep_outcomes) summary.outcomes.reserve(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double p = preds.p_home[i];
        Side side = Side::kAbstain;
        if (p >= high) side = Side::kHome;
        else if (p <= low) side = Side::kAway;
        if (side == Side::kAbstain) {
            if (keep_outcomes) {
                summary.outcomes.push_back({preds.game_ids[i], Side::kAbstain, 0.0, 0.0});
            }
            continue;
        }
        const RunLineQuote& quote = quotes.at(preds.game_ids[i]);
        const BetOutcome outcome =
            settle_margin(quote, preds.score_diffs[i], side, stake);
        summary.total_staked += outcome.stake;
        summary.total_profit += outcome.profit;
        ++summary.n_wagered;
        if (keep_outcomes) summary.outcomes.push_back(outcome);
    }
    summary.wager_fraction =
        static_cast<double>(summary.n_wagered) / static_cast<double>(preds.size());
    if (summary.n_wagered == 0) {
        summary.empty = true;
        summary.return_pct = 0.0;
    } else {
        summary.return_pct = 100.0 * summary.total_profit / summary.total_staked;
    }
    return summary;
}

}  // namespace

BacktestSummary naive_backtest(const PredictionSet& preds, const QuoteStore& quotes,
                               double stake) {
    // Every game is wagered: home at p >= 0.5, away below.
    return run_backtest(preds, quotes, 0.5, 0.5, stake, /*keep_outcomes=*/true);
}

BacktestSummary cutoff_backtest(const PredictionSet& preds, const QuoteStore& quotes,
                                double low, double high, double stake) {
    if (!(low >= 0.0 && low <= 0.5 && high >= 0.5 && high <= 1.0)) {
        throw ConfigError("cutoff_backtest: need 0 <= low <= 0.5 <= high <= 1");
    }
    return run_backtest(preds, quotes, low, high, stake, /*keep_outcomes=*/true);
}

BacktestGrid grid_search_cutoffs(const PredictionSet& preds, const QuoteStore& quotes,
                                 int n_low, int n_high, double stake, int jobs) {
    if (n_low < 1 || n_high < 1) {
        throw ConfigError("grid_search_cutoffs: need at least one cutoff per axis");
    }
    BacktestGrid grid;
    grid.low_cutoffs.resize(static_cast<std::size_t>(n_low));
    grid.high_cutoffs.resize(static_cast<std::size_t>(n_high));
    for (int i = 0; i < n_low; ++i) {
        grid.low_cutoffs[static_cast<std::size_t>(i)] =
            n_low == 1 ? 0.5 : 0.5 * static_cast<double>(i) / (n_low - 1);
    }
    for (int j = 0; j < n_high; ++j) {
        grid.high_cutoffs[static_cast<std::size_t>(j)] =
            n_high == 1 ? 0.5 : 0.5 + 0.5 * static_cast<double>(j) / (n_high - 1);
    }
    const std::size_t cells = grid.low_cutoffs.size() * grid.high_cutoffs.size();
    grid.returns_pct.assign(cells, 0.0);
    grid.wager_fraction.assign(cells, 0.0);
    grid.empty_cell.assign(cells, 0);

    auto run_rows = [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t i = row_begin; i < row_end; ++i) {
            for (std::size_t j = 0; j < grid.high_cutoffs.size(); ++j) {
                const BacktestSummary cell =
                    run_backtest(preds, quotes, grid.low_cutoffs[i],
                                 grid.high_cutoffs[j], stake, /*keep_outcomes=*/false);
                const std::size_t idx = i * grid.high_cutoffs.size() + j;
                grid.returns_pct[idx] = cell.return_pct;
                grid.wager_fraction[idx] = cell.wager_fraction;
                grid.empty_cell[idx] = cell.empty ? 1 : 0;
            }
        }
    };

    const std::size_t n_rows = grid.low_cutoffs.size();
    const std::size_t workers =
        std::min<std::size_t>(std::max(jobs, 1), n_rows);
    if (workers <= 1) {
        run_rows(0, n_rows);
    } else {
        std::vector<std::future<void>> futures;
        const std::size_t chunk = (n_rows + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n_rows, begin + chunk);
            if (begin >= end) break;
            futures.push_back(
                std::async(std::launch::async, run_rows, begin, end));
        }
        for (auto& f : futures) f.get();
    }
    return grid;
}

namespace {

int american_from_probability(double q) {
    q = std::clamp(q, 0.005, 0.995);
    const double decimal = 1.0 / q;
    if (decimal >= 2.0) {
        return static_cast<int>(std::llround(100.0 * (decimal - 1.0)));
    }
    return -static_cast<int>(std::llround(100.0 / (decimal - 1.0)));
}

}  // namespace

QuoteStore synth_quotes(const Dataset& data,
                        const std::map<std::string, double>& latent,
                        double home_advantage, double run_scale, double vig) {
    if (vig < 0.0) throw ConfigError("synth_quotes: vig must be >= 0");
    std::vector<RunLineQuote> quotes;
    quotes.reserve(data.size());
    for (const auto& game : data.games()) {
        auto home_it = latent.find(game.home_team);
        auto away_it = latent.find(game.away_team);
        if (home_it == latent.end() || away_it == latent.end()) {
            throw ConfigError("synth_quotes: no latent strength for game " +
                              game.game_id);
        }
        const double gap = home_it->second - away_it->second;
        const double p_home = sigmoid(gap + home_advantage);
        const double p_margin_one = std::exp(-margin_poisson_rate(run_scale, gap));

        RunLineQuote q;
        q.game_id = game.game_id;
        double cover_home;
        if (p_home >= 0.5) {
            // Home favored: home -1.5 covers only on a multi-run win.
            q.home_line = -1.5;
            cover_home = p_home * (1.0 - p_margin_one);
        } else {
            // Home underdog: home +1.5 covers on any win or a one-run loss.
            q.home_line = 1.5;
            cover_home = p_home + (1.0 - p_home) * p_margin_one;
        }
        q.away_line = -q.home_line;
        q.home_odds = american_from_probability(cover_home * (1.0 + vig));
        q.away_odds = american_from_probability((1.0 - cover_home) * (1.0 + vig));
        quotes.push_back(std::move(q));
    }
    return QuoteStore(std::move(quotes));
}

void write_grid_csv(const BacktestGrid& grid, const std::string& returns_path,
                    const std::string& wager_fraction_path) {
    std::vector<std::string> header = {"low_cutoff"};
    for (double h : grid.high_cutoffs) header.push_back(format_double(h, 4));
    auto emit = [&](const std::vector<double>& values, const std::string& path,
                    int precision) {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(grid.low_cutoffs.size());
        for (std::size_t i = 0; i < grid.low_cutoffs.size(); ++i) {
            std::vector<std::string> row = {format_double(grid.low_cutoffs[i], 4)};
            for (std::size_t j = 0; j < grid.high_cutoffs.size(); ++j) {
                row.push_back(
                    format_double(values[i * grid.high_cutoffs.size() + j], precision));
            }
            rows.push_back(std::move(row));
        }
        write_csv(path, header, rows);
    };
    emit(grid.returns_pct, returns_path, 4);
    emit(grid.wager_fraction, wager_fraction_path, 6);
}

}  // namespace runline::betting
