#include "runline/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "runline/csv.hpp"
#include "runline/error.hpp"

namespace runline::metrics {

namespace {

void require_nonempty(const PredictionSet& preds, const char* op) {
    if (preds.empty()) {
        throw ConfigError(std::string(op) + ": empty prediction set");
    }
}

}  // namespace

double accuracy(const PredictionSet& preds, double threshold) {
    require_nonempty(preds, "accuracy");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool predicted_home = preds.p_home[i] >= threshold;
        if (predicted_home == (preds.labels[i] != 0)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(preds.size());
}

double auroc(const PredictionSet& preds) {
    require_nonempty(preds, "auroc");
    const std::size_t n = preds.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return preds.p_home[a] < preds.p_home[b];
    });

    // Average ranks over tied prediction values, then Mann-Whitney U.
    double positive_rank_sum = 0.0;
    std::size_t n_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && preds.p_home[order[j]] == preds.p_home[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
        for (std::size_t k = i; k < j; ++k) {
            if (preds.labels[order[k]]) {
                positive_rank_sum += avg_rank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw ConfigError("auroc: both classes must be present (got " +
                          std::to_string(n_pos) + " positives of " +
                          std::to_string(n) + ")");
    }
    const double u = positive_rank_sum -
                     static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double log_loss(const PredictionSet& preds, double epsilon) {
    require_nonempty(preds, "log_loss");
    if (!(epsilon > 0.0) || epsilon >= 0.5) {
        throw ConfigError("log_loss: epsilon must lie in (0, 0.5)");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double p = std::clamp(preds.p_home[i], epsilon, 1.0 - epsilon);
        total += preds.labels[i] ? -std::log(p) : -std::log1p(-p);
    }
    return total / static_cast<double>(preds.size());
}

double brier(const PredictionSet& preds) {
    require_nonempty(preds, "brier");
    double total = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double d = preds.p_home[i] - (preds.labels[i] ? 1.0 : 0.0);
        total += d * d;
    }
    return total / static_cast<double>(preds.size());
}

MetricsReport report(const PredictionSet& preds, double threshold) {
    preds.validate();
    MetricsReport r;
    r.model_name = preds.model_name;
    r.n_games = preds.size();
    r.threshold = threshold;
    r.accuracy = accuracy(preds, threshold);
    r.auroc = auroc(preds);
    r.log_loss = log_loss(preds);
    r.brier = brier(preds);
    return r;
}

void write_metrics_csv(const std::vector<MetricsReport>& reports,
                       const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(reports.size());
    for (const auto& r : reports) {
        rows.push_back({r.model_name, std::to_string(r.n_games),
                        format_double(r.accuracy, 6), format_double(r.auroc, 6),
                        format_double(r.log_loss, 6), format_double(r.brier, 6)});
    }
    write_csv(path, {"model", "n_games", "accuracy", "auroc", "log_loss", "brier"},
              rows);
}

void write_metrics_json(const std::vector<MetricsReport>& reports,
                        const std::string& path) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        doc.push_back({{"model", r.model_name},
                       {"n_games", r.n_games},
                       {"accuracy", r.accuracy},
                       {"auroc", r.auroc},
                       {"log_loss", r.log_loss},
                       {"brier", r.brier},
                       {"threshold", r.threshold}});
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

}  // namespace runline::metrics
