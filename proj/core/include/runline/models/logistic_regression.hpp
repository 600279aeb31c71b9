#pragma once

#include "runline/models/classifier.hpp"

namespace runline::models {

struct LogrConfig {
    double learning_rate = 1.0;  // initial step; halved whenever a step would raise the loss
    int epochs = 500;
    double l2 = 0.0;
    bool standardize = true;
};

/// L2-regularized logistic regression fit by full-batch gradient descent with
/// step backtracking, so the training loss is non-increasing by construction.
/// Weights start at zero: a zero-epoch fit predicts 0.5 everywhere.
class LogisticRegression : public ProbClassifier {
public:
    explicit LogisticRegression(LogrConfig config = {});

    std::map<std::string, double> hyperparameters() const override;

    /// Coefficients in the original (unstandardized) feature space,
    /// intercept first. Directly interpretable as log-odds per unit.
    std::vector<double> coefficients() const;

    /// Regularized training loss after each accepted epoch (entry 0 is the
    /// loss at initialization).
    const std::vector<double>& loss_history() const { return loss_history_; }

protected:
    void do_fit(const FeatureMatrix& train) override;
    std::vector<double> do_predict(const FeatureMatrix& x) const override;

private:
    double raw_score(const double* std_row) const;

    LogrConfig config_;
    Standardizer scaler_;
    std::vector<double> weights_;  // standardized space
    double bias_ = 0.0;
    std::vector<double> loss_history_;
};

}  // namespace runline::models
