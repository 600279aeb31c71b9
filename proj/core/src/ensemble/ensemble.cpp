#include "runline/ensemble/ensemble.hpp"

#include <algorithm>
#include <numeric>

#include "runline/csv.hpp"
#include "runline/error.hpp"

namespace runline::ensemble {

namespace {

void require_aligned(const PredictionSet& a, const PredictionSet& b) {
    if (a.game_ids != b.game_ids) {
        throw ConfigError("ensemble: prediction sets '" + a.model_name + "' and '" +
                          b.model_name + "' cover different game lists");
    }
}

std::vector<double> resolve_weights(const std::vector<double>& weights) {
    if (weights.empty()) return {1.0, 1.0, 1.0};
    if (weights.size() != 3) {
        throw ConfigError("ensemble: majority vote takes exactly 3 weights");
    }
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ConfigError("ensemble: weights must be non-negative");
        total += w;
    }
    if (total <= 0.0) throw ConfigError("ensemble: weights sum to zero");
    return weights;
}

bool weighted_home_vote(const std::array<double, 3>& p,
                        const std::vector<double>& w, double threshold) {
    double home = 0.0, total = 0.0;
    for (std::size_t m = 0; m < 3; ++m) {
        if (p[m] >= threshold) home += w[m];
        total += w[m];
    }
    return home * 2.0 >= total;  // weight ties go to the home side, like p == threshold
}

}  // namespace

AgreementMatrix agreement_matrix(const std::vector<PredictionSet>& preds,
                                 double threshold) {
    if (preds.empty()) throw ConfigError("agreement_matrix: no prediction sets");
    for (const auto& p : preds) {
        p.validate();
        require_aligned(preds.front(), p);
    }
    const std::size_t m = preds.size();
    const std::size_t n = preds.front().size();
    if (n == 0) throw ConfigError("agreement_matrix: empty prediction sets");

    AgreementMatrix matrix;
    matrix.model_names.reserve(m);
    for (const auto& p : preds) matrix.model_names.push_back(p.model_name);
    matrix.agree_fraction.assign(m * m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            std::size_t agree = 0;
            for (std::size_t g = 0; g < n; ++g) {
                const bool vi = preds[i].p_home[g] >= threshold;
                const bool vj = preds[j].p_home[g] >= threshold;
                if (vi == vj) ++agree;
            }
            const double frac = static_cast<double>(agree) / static_cast<double>(n);
            matrix.agree_fraction[i * m + j] = frac;
            matrix.agree_fraction[j * m + i] = frac;
        }
    }
    return matrix;
}

PredictionSet majority_vote(const PredictionSet& a, const PredictionSet& b,
                            const PredictionSet& c,
                            [[maybe_unused]] double threshold,
                            const std::vector<double>& weights) {
    require_aligned(a, b);
    require_aligned(a, c);
    const auto w = resolve_weights(weights);
    const double w_total = w[0] + w[1] + w[2];

    PredictionSet out;
    out.model_name = "vote(" + a.model_name + "," + b.model_name + "," +
                     c.model_name + ")";
    out.game_ids = a.game_ids;
    out.labels = a.labels;
    out.score_diffs = a.score_diffs;
    out.p_home.reserve(a.size());
    for (std::size_t g = 0; g < a.size(); ++g) {
        out.p_home.push_back(
            (w[0] * a.p_home[g] + w[1] * b.p_home[g] + w[2] * c.p_home[g]) / w_total);
    }
    out.validate();
    return out;
}

double majority_vote_accuracy(const PredictionSet& a, const PredictionSet& b,
                              const PredictionSet& c, double threshold,
                              const std::vector<double>& weights) {
    require_aligned(a, b);
    require_aligned(a, c);
    if (a.empty()) throw ConfigError("majority_vote_accuracy: empty prediction sets");
    const auto w = resolve_weights(weights);
    std::size_t correct = 0;
    for (std::size_t g = 0; g < a.size(); ++g) {
        const bool home = weighted_home_vote(
            {a.p_home[g], b.p_home[g], c.p_home[g]}, w, threshold);
        if (home == (a.labels[g] != 0)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(a.size());
}

double oracle_accuracy(const std::vector<PredictionSet>& preds, double threshold) {
    if (preds.empty()) throw ConfigError("oracle_accuracy: no prediction sets");
    for (const auto& p : preds) require_aligned(preds.front(), p);
    const std::size_t n = preds.front().size();
    if (n == 0) throw ConfigError("oracle_accuracy: empty prediction sets");
    std::size_t covered = 0;
    for (std::size_t g = 0; g < n; ++g) {
        const bool label = preds.front().labels[g] != 0;
        for (const auto& p : preds) {
            if ((p.p_home[g] >= threshold) == label) {
                ++covered;
                break;
            }
        }
    }
    return static_cast<double>(covered) / static_cast<double>(n);
}

std::vector<TripletResult> triplet_table(const std::vector<PredictionSet>& preds,
                                         double threshold) {
    if (preds.size() < 3) {
        throw ConfigError("triplet_table: need at least 3 models, got " +
                          std::to_string(preds.size()));
    }
    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return preds[x].model_name < preds[y].model_name;
    });

    std::vector<TripletResult> results;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            for (std::size_t k = j + 1; k < order.size(); ++k) {
                const auto& a = preds[order[i]];
                const auto& b = preds[order[j]];
                const auto& c = preds[order[k]];
                TripletResult t;
                t.models = {a.model_name, b.model_name, c.model_name};
                t.majority_accuracy = majority_vote_accuracy(a, b, c, threshold);
                t.oracle_accuracy = oracle_accuracy({a, b, c}, threshold);
                results.push_back(std::move(t));
            }
        }
    }
    return results;
}

void write_agreement_csv(const AgreementMatrix& matrix, const std::string& path) {
    std::vector<std::string> header = {"model"};
    header.insert(header.end(), matrix.model_names.begin(), matrix.model_names.end());
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < matrix.model_names.size(); ++i) {
        std::vector<std::string> row = {matrix.model_names[i]};
        for (std::size_t j = 0; j < matrix.model_names.size(); ++j) {
            row.push_back(format_double(matrix.at(i, j), 6));
        }
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

void write_triplets_csv(const std::vector<TripletResult>& triplets,
                        const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(triplets.size());
    for (const auto& t : triplets) {
        rows.push_back({t.models[0], t.models[1], t.models[2],
                        format_double(t.majority_accuracy, 6),
                        format_double(t.oracle_accuracy, 6)});
    }
    write_csv(path,
              {"model_1", "model_2", "model_3", "majority_accuracy",
               "oracle_accuracy"},
              rows);
}

}  // namespace runline::ensemble
