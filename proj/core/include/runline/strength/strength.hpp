#pragma once

#include <optional>
#include <string>
#include <vector>

#include "runline/prediction.hpp"

namespace runline::strength {

/// Score-differential summary of the games whose predicted probability
/// rounds to bin_center. sd is sample (n-1) and absent below two games.
struct BinSummary {
    double bin_center = 0.0;
    std::size_t n_games = 0;
    std::optional<double> mean_diff;
    std::optional<double> sd_diff;
};

/// Score-differential summary over an inclusive probability range; empty
/// ranges keep n_games = 0 and render "-" for mean/sd.
struct RangeReport {
    std::string model_name;
    double low = 0.0;
    double high = 1.0;
    std::size_t n_games = 0;
    std::optional<double> mean_diff;
    std::optional<double> sd_diff;
};

/// OLS of score differential on predicted probability.
struct FitSummary {
    double slope = 0.0;      // runs per unit probability
    double intercept = 0.0;  // runs
    double r_squared = 0.0;
};

/// Assigns every game to the nearest multiple of bin_width and summarizes
/// score differentials per bin. bin_width must divide 1 evenly (default 0.1,
/// the "rounded to the nearest 10%" convention). Returns all 1/bin_width + 1
/// bins, populated or not, so the output is directly plottable.
std::vector<BinSummary> bin_by_probability(const PredictionSet& preds,
                                           double bin_width = 0.1);

/// Least squares fit of score_diff on p_home; requires >= 3 games and
/// non-constant predictions.
FitSummary prob_diff_regression(const PredictionSet& preds);

/// Inclusive-range summary (low <= p <= high).
RangeReport range_report(const PredictionSet& preds, double low, double high);

/// The six ranges reported by the toss-up / favorite / underdog tables:
/// 45-55, 49-51, 75-100, 85-100, 0-25, 0-15 (percent).
std::vector<RangeReport> standard_report_suite(const PredictionSet& preds);

void write_bins_csv(const std::vector<BinSummary>& bins, const std::string& path);
void write_ranges_csv(const std::vector<RangeReport>& ranges, const std::string& path);
void write_strength_json(const std::vector<BinSummary>& bins,
                         const std::vector<RangeReport>& ranges,
                         const FitSummary& fit, const std::string& path);

}  // namespace runline::strength
