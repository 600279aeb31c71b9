#pragma once

#include <string>
#include <vector>

#include "runline/prediction.hpp"

namespace runline::metrics {

/// Clamp applied to probabilities inside log_loss. The value reproduces the
/// HomeWin log-loss convention: a hard wrong prediction costs -ln(1e-15).
inline constexpr double kDefaultLogLossEpsilon = 1e-15;
inline constexpr double kDefaultThreshold = 0.5;

struct MetricsReport {
    std::string model_name;
    std::size_t n_games = 0;
    double accuracy = 0.0;
    double auroc = 0.0;
    double log_loss = 0.0;
    double brier = 0.0;
    double threshold = kDefaultThreshold;
};

/// Fraction of games where (p >= threshold) matches the label. A probability
/// exactly at the threshold counts as a home prediction.
double accuracy(const PredictionSet& preds, double threshold = kDefaultThreshold);

/// Probability that a random home-win game outranks a random home-loss game,
/// ties counted one half (Mann-Whitney). Sort-and-rank, O(n log n). Throws
/// when only one class is present.
double auroc(const PredictionSet& preds);

/// Mean cross entropy with probabilities clamped to [eps, 1-eps].
double log_loss(const PredictionSet& preds, double epsilon = kDefaultLogLossEpsilon);

/// Mean squared difference between probability and outcome.
double brier(const PredictionSet& preds);

/// All four statistics at default threshold/epsilon.
MetricsReport report(const PredictionSet& preds,
                     double threshold = kDefaultThreshold);

/// model,n_games,accuracy,auroc,log_loss,brier — one row per report.
void write_metrics_csv(const std::vector<MetricsReport>& reports,
                       const std::string& path);
void write_metrics_json(const std::vector<MetricsReport>& reports,
                        const std::string& path);

}  // namespace runline::metrics
