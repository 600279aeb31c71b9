#pragma once

#include "runline/models/classifier.hpp"

namespace runline::models {

struct KnnConfig {
    int k = 150;               // paper's grid-search optimum
    double minkowski_p = 2.0;  // distance exponent, >= 1
    bool standardize = true;
};

/// K-nearest-neighbors with Minkowski distance. p_home is the fraction of the
/// k nearest training rows (train-statistics standardization) whose label is
/// a home win; distance ties break toward the lower training-row index, so
/// predictions are always multiples of 1/k and fully deterministic.
class KnnClassifier : public ProbClassifier {
public:
    explicit KnnClassifier(KnnConfig config = {});

    std::map<std::string, double> hyperparameters() const override;

protected:
    void do_fit(const FeatureMatrix& train) override;
    std::vector<double> do_predict(const FeatureMatrix& x) const override;

private:
    KnnConfig config_;
    Standardizer scaler_;
    std::vector<double> train_values_;  // standardized, row-major
    std::vector<std::uint8_t> train_labels_;
    std::size_t dim_ = 0;
};

/// One-shot convenience wrapper used by the CLI and tests.
PredictionSet knn_fit_predict(const FeatureMatrix& train, const FeatureMatrix& test,
                              int k, double minkowski_p = 2.0);

}  // namespace runline::models
