#include "runline/models/knn.hpp"

#include <algorithm>
#include <cmath>

#include "runline/error.hpp"

namespace runline::models {

KnnClassifier::KnnClassifier(KnnConfig config)
    : ProbClassifier("knn"), config_(config) {
    if (config_.k < 1) throw ConfigError("knn: k must be >= 1");
    if (config_.minkowski_p < 1.0) {
        throw ConfigError("knn: minkowski exponent must be >= 1");
    }
}

std::map<std::string, double> KnnClassifier::hyperparameters() const {
    return {{"k", static_cast<double>(config_.k)},
            {"minkowski_p", config_.minkowski_p},
            {"standardize", config_.standardize ? 1.0 : 0.0}};
}

void KnnClassifier::do_fit(const FeatureMatrix& train) {
    if (static_cast<std::size_t>(config_.k) > train.rows()) {
        throw ConfigError("knn: k=" + std::to_string(config_.k) + " exceeds " +
                          std::to_string(train.rows()) + " training rows");
    }
    dim_ = train.cols();
    if (config_.standardize) {
        scaler_.fit(train);
        train_values_ = scaler_.transform(train);
    } else {
        train_values_ = train.values;
    }
    train_labels_ = train.labels;
}

std::vector<double> KnnClassifier::do_predict(const FeatureMatrix& x) const {
    if (x.cols() != dim_) {
        throw ConfigError("knn: expected " + std::to_string(dim_) + " features, got " +
                          std::to_string(x.cols()));
    }
    const std::size_t n_train = train_labels_.size();
    const std::size_t k = static_cast<std::size_t>(config_.k);
    const double p = config_.minkowski_p;
    const bool euclidean = p == 2.0;

    std::vector<double> probs(x.rows());
    std::vector<double> query(dim_);
    std::vector<std::pair<double, std::size_t>> dist(n_train);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            query[c] = config_.standardize ? scaler_.transform_one(x.at(r, c), c)
                                           : x.at(r, c);
        }
        for (std::size_t i = 0; i < n_train; ++i) {
            const double* row = train_values_.data() + i * dim_;
            double acc = 0.0;
            if (euclidean) {
                for (std::size_t c = 0; c < dim_; ++c) {
                    const double dx = query[c] - row[c];
                    acc += dx * dx;
                }
            } else {
                for (std::size_t c = 0; c < dim_; ++c) {
                    acc += std::pow(std::abs(query[c] - row[c]), p);
                }
            }
            // Monotone in the true Minkowski distance; the final root is
            // skipped since only the ordering matters.
            dist[i] = {acc, i};
        }
        std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         dist.end());
        std::size_t home_wins = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (train_labels_[dist[i].second]) ++home_wins;
        }
        probs[r] = static_cast<double>(home_wins) / static_cast<double>(k);
    }
    return probs;
}

PredictionSet knn_fit_predict(const FeatureMatrix& train, const FeatureMatrix& test,
                              int k, double minkowski_p) {
    KnnConfig config;
    config.k = k;
    config.minkowski_p = minkowski_p;
    KnnClassifier model(config);
    model.fit(train);
    return model.predict_set(test);
}

}  // namespace runline::models
