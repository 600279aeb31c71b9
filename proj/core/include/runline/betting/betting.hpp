#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "runline/data/game.hpp"
#include "runline/prediction.hpp"

namespace runline::betting {

/// Run line and American-odds prices for both sides of one game.
struct RunLineQuote {
    std::string game_id;
    double home_line = -1.5;  // home must win by more than 1.5
    int home_odds = -110;
    double away_line = 1.5;   // always -home_line
    int away_odds = -110;

    void validate() const;
};

enum class Side { kHome, kAway, kAbstain };

struct BetOutcome {
    std::string game_id;
    Side side = Side::kAbstain;
    double stake = 0.0;
    double profit = 0.0;  // negative = loss; push keeps stake with profit 0
};

/// Immutable quote lookup keyed by game_id.
class QuoteStore {
public:
    QuoteStore() = default;
    explicit QuoteStore(std::vector<RunLineQuote> quotes);

    /// odds CSV: game_id,home_line,home_odds,away_line,away_odds.
    static QuoteStore load_csv(const std::string& path);
    void save_csv(const std::string& path) const;

    const RunLineQuote& at(const std::string& game_id) const;
    bool contains(const std::string& game_id) const;
    std::size_t size() const { return quotes_.size(); }

private:
    std::map<std::string, RunLineQuote> quotes_;
};

/// Profit per unit staked: +O pays O/100, -O pays 100/O. |odds| must be >= 100.
double payout_ratio(int odds);

/// Implied probability of one side's American odds (no normalization).
double implied_probability(int odds);

/// Settles one bet knowing only the home-minus-away margin: the chosen side
/// covers when its margin plus its line is positive; exactly zero (integer
/// lines) is a push returning the stake. Winner's profit is
/// stake * payout_ratio(side odds). Lines are half-run multiples, so the
/// comparisons are exact.
BetOutcome settle_margin(const RunLineQuote& quote, int home_margin, Side side,
                         double stake);

/// settle_margin with the margin taken from a full game record; the quote and
/// game must share a game_id.
BetOutcome settle(const RunLineQuote& quote, const GameRecord& game, Side side,
                  double stake);

struct BacktestSummary {
    double return_pct = 0.0;     // 100 * profit / total staked; 0 when nothing staked
    double wager_fraction = 0.0; // wagered games / total games
    std::size_t n_wagered = 0;
    double total_staked = 0.0;
    double total_profit = 0.0;
    bool empty = false;  // no games wagered; return_pct forced to 0
    std::vector<BetOutcome> outcomes;
};

/// Bets every game: home when p >= 0.5, away otherwise, flat stakes.
/// Every game in `preds` must have a quote.
BacktestSummary naive_backtest(const PredictionSet& preds, const QuoteStore& quotes,
                               double stake = 1.0);

/// Bets home when p >= high, away when p <= low, abstains in between.
/// Requires 0 <= low <= 0.5 <= high <= 1; low = high = 0.5 reproduces the
/// naive strategy exactly.
BacktestSummary cutoff_backtest(const PredictionSet& preds, const QuoteStore& quotes,
                                double low, double high, double stake = 1.0);

/// Returns and wager fractions over the full cutoff grid.
struct BacktestGrid {
    std::vector<double> low_cutoffs;   // n_low values spanning [0, 0.5]
    std::vector<double> high_cutoffs;  // n_high values spanning [0.5, 1]
    std::vector<double> returns_pct;   // row-major, n_low x n_high
    std::vector<double> wager_fraction;
    std::vector<std::uint8_t> empty_cell;

    double ret(std::size_t low_idx, std::size_t high_idx) const {
        return returns_pct[low_idx * high_cutoffs.size() + high_idx];
    }
    double frac(std::size_t low_idx, std::size_t high_idx) const {
        return wager_fraction[low_idx * high_cutoffs.size() + high_idx];
    }
};

/// Evaluates every (low, high) pair; defaults to the 20x20 = 400-cell sweep
/// with both endpoints included, so the (0.5, 0.5) naive cell is always
/// present. Cells are independent and may evaluate on up to `jobs` threads.
BacktestGrid grid_search_cutoffs(const PredictionSet& preds, const QuoteStore& quotes,
                                 int n_low = 20, int n_high = 20, double stake = 1.0,
                                 int jobs = 1);

/// Synthetic odds maker: the favored side gets the -1.5 line and prices are
/// set so normalized implied probabilities match the generating model's
/// cover probabilities, inflated by (1 + vig). Fully deterministic given the
/// latent strengths and generator parameters.
QuoteStore synth_quotes(const Dataset& data,
                        const std::map<std::string, double>& latent,
                        double home_advantage, double run_scale, double vig);

/// Grid CSVs: header row of high cutoffs, first column of low cutoffs,
/// cells = return % (plus the twin wager-fraction file).
void write_grid_csv(const BacktestGrid& grid, const std::string& returns_path,
                    const std::string& wager_fraction_path);

}  // namespace runline::betting
