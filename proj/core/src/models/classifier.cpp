#include "runline/models/classifier.hpp"

#include <cmath>

#include "runline/error.hpp"

namespace runline::models {

void Standardizer::fit(const FeatureMatrix& train) {
    const std::size_t d = train.cols();
    const std::size_t n = train.rows();
    if (n == 0) throw ConfigError("standardizer: empty training matrix");
    mean_.assign(d, 0.0);
    inv_sd_.assign(d, 1.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) mean_[c] += train.at(r, c);
    }
    for (std::size_t c = 0; c < d; ++c) mean_[c] /= static_cast<double>(n);
    std::vector<double> var(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const double dx = train.at(r, c) - mean_[c];
            var[c] += dx * dx;
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        const double sd = n > 1 ? std::sqrt(var[c] / static_cast<double>(n - 1)) : 0.0;
        inv_sd_[c] = sd > 1e-12 ? 1.0 / sd : 1.0;  // constant column: leave centered
    }
}

std::vector<double> Standardizer::transform(const FeatureMatrix& x) const {
    if (x.cols() != dim()) {
        throw ConfigError("standardizer: expected " + std::to_string(dim()) +
                          " features, got " + std::to_string(x.cols()));
    }
    std::vector<double> out(x.rows() * x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            out[r * x.cols() + c] = transform_one(x.at(r, c), c);
        }
    }
    return out;
}

void ProbClassifier::fit(const FeatureMatrix& train) {
    train.validate();
    if (train.rows() < 2) {
        throw ConfigError(name_ + ": need at least 2 training rows");
    }
    if (requires_both_classes_) {
        bool has_pos = false, has_neg = false;
        for (std::uint8_t y : train.labels) (y ? has_pos : has_neg) = true;
        if (!has_pos || !has_neg) {
            throw ConfigError(name_ + ": training data contains a single class");
        }
    }
    do_fit(train);
    fitted_ = true;
}

std::vector<double> ProbClassifier::predict(const FeatureMatrix& x) const {
    if (requires_fit_ && !fitted_) {
        throw ConfigError(name_ + ": predict called before fit");
    }
    auto probs = do_predict(x);
    if (probs.size() != x.rows()) {
        throw Error(name_ + ": prediction count mismatch");
    }
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
            throw Error(name_ + ": produced probability outside [0,1]");
        }
    }
    return probs;
}

PredictionSet ProbClassifier::predict_set(const FeatureMatrix& x) const {
    PredictionSet out;
    out.model_name = name_;
    out.game_ids = x.game_ids;
    out.p_home = predict(x);
    out.labels = x.labels;
    out.score_diffs = x.score_diffs;
    out.validate();
    return out;
}

}  // namespace runline::models
