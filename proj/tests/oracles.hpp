// Independent reference implementations used to check the library. Everything
// here is deliberately brute force (enumeration, all-pairs, exhaustive sort)
// and shares no code with the implementations under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "runline/features/feature_matrix.hpp"
#include "runline/prediction.hpp"

namespace oracles {

inline double accuracy(const runline::PredictionSet& preds, double threshold = 0.5) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool call_home = preds.p_home[i] >= threshold;
        const bool home_won = preds.labels[i] != 0;
        if (call_home == home_won) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(preds.size());
}

// All-pairs Mann-Whitney with ties counted one half.
inline double auroc_pairs(const runline::PredictionSet& preds) {
    double score = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (!preds.labels[i]) continue;
        for (std::size_t j = 0; j < preds.size(); ++j) {
            if (preds.labels[j]) continue;
            ++pairs;
            if (preds.p_home[i] > preds.p_home[j]) score += 1.0;
            else if (preds.p_home[i] == preds.p_home[j]) score += 0.5;
        }
    }
    return score / static_cast<double>(pairs);
}

inline double log_loss(const runline::PredictionSet& preds, double eps = 1e-15) {
    double total = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        double p = preds.p_home[i];
        if (p < eps) p = eps;
        if (p > 1.0 - eps) p = 1.0 - eps;
        total += preds.labels[i] ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(preds.size());
}

inline double brier(const runline::PredictionSet& preds) {
    double total = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double y = preds.labels[i] ? 1.0 : 0.0;
        total += (preds.p_home[i] - y) * (preds.p_home[i] - y);
    }
    return total / static_cast<double>(preds.size());
}

// Exhaustive KNN: standardize by train statistics, sort every (distance,
// index) pair, take the first k. Mirrors the documented tie-break contract.
inline std::vector<double> knn_probs(const runline::features::FeatureMatrix& train,
                                     const runline::features::FeatureMatrix& test,
                                     int k, double minkowski_p,
                                     bool standardize = true) {
    const std::size_t d = train.cols();
    std::vector<double> mu(d, 0.0), sd(d, 1.0);
    if (standardize) {
        for (std::size_t c = 0; c < d; ++c) {
            double s = 0.0;
            for (std::size_t r = 0; r < train.rows(); ++r) s += train.at(r, c);
            mu[c] = s / static_cast<double>(train.rows());
            double ss = 0.0;
            for (std::size_t r = 0; r < train.rows(); ++r) {
                ss += (train.at(r, c) - mu[c]) * (train.at(r, c) - mu[c]);
            }
            const double v = train.rows() > 1
                                 ? std::sqrt(ss / static_cast<double>(train.rows() - 1))
                                 : 0.0;
            sd[c] = v > 1e-12 ? v : 1.0;
        }
    }
    auto dist = [&](std::size_t tr, std::size_t te) {
        double acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double a = (train.at(tr, c) - mu[c]) / sd[c];
            const double b = (test.at(te, c) - mu[c]) / sd[c];
            acc += std::pow(std::abs(a - b), minkowski_p);
        }
        return std::pow(acc, 1.0 / minkowski_p);
    };
    std::vector<double> probs(test.rows());
    for (std::size_t te = 0; te < test.rows(); ++te) {
        std::vector<std::pair<double, std::size_t>> order;
        order.reserve(train.rows());
        for (std::size_t tr = 0; tr < train.rows(); ++tr) {
            order.emplace_back(dist(tr, te), tr);
        }
        std::sort(order.begin(), order.end());
        std::size_t wins = 0;
        for (int i = 0; i < k; ++i) {
            if (train.labels[order[static_cast<std::size_t>(i)].second]) ++wins;
        }
        probs[te] = static_cast<double>(wins) / static_cast<double>(k);
    }
    return probs;
}

// Exhaustive first-boosting-round split search: logistic gradients at the
// base-rate prior, xgboost gain, every feature, every adjacent-value
// boundary. Returns (feature, threshold).
inline std::pair<int, double> gbdt_first_split(
    const runline::features::FeatureMatrix& train, double l2_leaf) {
    const std::size_t n = train.rows();
    double base = 0.0;
    for (auto y : train.labels) base += y;
    base /= static_cast<double>(n);
    const double p0 = base;  // prior probability after the log-odds init
    std::vector<double> g(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = p0 - static_cast<double>(train.labels[i]);
        h[i] = p0 * (1.0 - p0);
    }
    double g_tot = 0.0, h_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        g_tot += g[i];
        h_tot += h[i];
    }
    double best_gain = -1.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    for (std::size_t f = 0; f < train.cols(); ++f) {
        std::vector<std::pair<double, std::size_t>> sorted;
        sorted.reserve(n);
        for (std::size_t i = 0; i < n; ++i) sorted.emplace_back(train.at(i, f), i);
        std::sort(sorted.begin(), sorted.end());
        double gl = 0.0, hl = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            gl += g[sorted[i].second];
            hl += h[sorted[i].second];
            if (sorted[i].first == sorted[i + 1].first) continue;
            const double gr = g_tot - gl;
            const double hr = h_tot - hl;
            const double gain = 0.5 * (gl * gl / (hl + l2_leaf) + gr * gr / (hr + l2_leaf) -
                                       g_tot * g_tot / (h_tot + l2_leaf));
            if (gain > best_gain + 1e-12) {
                best_gain = gain;
                best_feature = static_cast<int>(f);
                best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
            }
        }
    }
    return {best_feature, best_threshold};
}

}  // namespace oracles
