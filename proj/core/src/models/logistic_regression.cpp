#include "runline/models/logistic_regression.hpp"

#include <algorithm>
#include <cmath>

#include "runline/error.hpp"
#include "runline/math.hpp"

namespace runline::models {

namespace {

constexpr double kLossClamp = 1e-12;

double regularized_loss(const std::vector<double>& z,
                        const std::vector<std::uint8_t>& y, double l2,
                        const std::vector<double>& w) {
    double loss = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double p = std::clamp(sigmoid(z[i]), kLossClamp, 1.0 - kLossClamp);
        loss += y[i] ? -std::log(p) : -std::log1p(-p);
    }
    loss /= static_cast<double>(z.size());
    if (l2 > 0.0) {
        double ss = 0.0;
        for (double wj : w) ss += wj * wj;
        loss += 0.5 * l2 * ss;
    }
    return loss;
}

}  // namespace

LogisticRegression::LogisticRegression(LogrConfig config)
    : ProbClassifier("logr"), config_(config) {
    if (config_.epochs < 0) throw ConfigError("logr: epochs must be >= 0");
    if (config_.learning_rate <= 0) throw ConfigError("logr: learning rate must be > 0");
    if (config_.l2 < 0) throw ConfigError("logr: l2 must be >= 0");
}

std::map<std::string, double> LogisticRegression::hyperparameters() const {
    return {{"learning_rate", config_.learning_rate},
            {"epochs", static_cast<double>(config_.epochs)},
            {"l2", config_.l2},
            {"standardize", config_.standardize ? 1.0 : 0.0}};
}

void LogisticRegression::do_fit(const FeatureMatrix& train) {
    const std::size_t n = train.rows();
    const std::size_t d = train.cols();
    scaler_ = Standardizer();
    std::vector<double> x;
    if (config_.standardize) {
        scaler_.fit(train);
        x = scaler_.transform(train);
    } else {
        x = train.values;
    }

    weights_.assign(d, 0.0);
    bias_ = 0.0;
    loss_history_.clear();

    std::vector<double> z(n, 0.0);
    std::vector<double> grad_w(d);
    auto compute_scores = [&](const std::vector<double>& w, double b) {
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = x.data() + i * d;
            double s = b;
            for (std::size_t c = 0; c < d; ++c) s += w[c] * row[c];
            z[i] = s;
        }
    };

    compute_scores(weights_, bias_);
    double loss = regularized_loss(z, train.labels, config_.l2, weights_);
    loss_history_.push_back(loss);

    double step = config_.learning_rate;
    for (int epoch = 0; epoch < config_.epochs; ++epoch) {
        // Full-batch gradient at the current point.
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double err = sigmoid(z[i]) - static_cast<double>(train.labels[i]);
            const double* row = x.data() + i * d;
            for (std::size_t c = 0; c < d; ++c) grad_w[c] += err * row[c];
            grad_b += err;
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t c = 0; c < d; ++c) {
            grad_w[c] = grad_w[c] * inv_n + config_.l2 * weights_[c];
        }
        grad_b *= inv_n;

        // Backtracking: only accept steps that do not raise the loss.
        bool accepted = false;
        std::vector<double> w_try(d);
        for (int half = 0; half < 40; ++half) {
            for (std::size_t c = 0; c < d; ++c) w_try[c] = weights_[c] - step * grad_w[c];
            const double b_try = bias_ - step * grad_b;
            compute_scores(w_try, b_try);
            const double new_loss =
                regularized_loss(z, train.labels, config_.l2, w_try);
            if (new_loss <= loss) {
                weights_ = w_try;
                bias_ = b_try;
                loss = new_loss;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            compute_scores(weights_, bias_);  // restore score cache
            break;                            // converged to machine precision
        }
        loss_history_.push_back(loss);
        step *= 1.1;  // recover after halvings; next epoch backtracks again if needed
    }
}

double LogisticRegression::raw_score(const double* std_row) const {
    double s = bias_;
    for (std::size_t c = 0; c < weights_.size(); ++c) s += weights_[c] * std_row[c];
    return s;
}

std::vector<double> LogisticRegression::do_predict(const FeatureMatrix& x) const {
    if (x.cols() != weights_.size()) {
        throw ConfigError("logr: expected " + std::to_string(weights_.size()) +
                          " features, got " + std::to_string(x.cols()));
    }
    std::vector<double> probs(x.rows());
    std::vector<double> row(x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            row[c] = config_.standardize ? scaler_.transform_one(x.at(r, c), c)
                                         : x.at(r, c);
        }
        probs[r] = sigmoid(raw_score(row.data()));
    }
    return probs;
}

std::vector<double> LogisticRegression::coefficients() const {
    if (!fitted()) throw ConfigError("logr: coefficients requested before fit");
    std::vector<double> coef(weights_.size() + 1);
    if (!config_.standardize) {
        coef[0] = bias_;
        for (std::size_t c = 0; c < weights_.size(); ++c) coef[c + 1] = weights_[c];
        return coef;
    }
    double intercept = bias_;
    for (std::size_t c = 0; c < weights_.size(); ++c) {
        const double slope = weights_[c] / scaler_.sd(c);
        coef[c + 1] = slope;
        intercept -= slope * scaler_.mean(c);
    }
    coef[0] = intercept;
    return coef;
}

}  // namespace runline::models
