#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "runline/features/feature_matrix.hpp"
#include "runline/prediction.hpp"

namespace runline::models {

using features::FeatureMatrix;

/// Column-wise standardization fitted on training statistics only, so test
/// rows never leak into the scaling.
class Standardizer {
public:
    void fit(const FeatureMatrix& train);
    bool fitted() const { return !mean_.empty(); }
    std::size_t dim() const { return mean_.size(); }

    double transform_one(double value, std::size_t col) const {
        return (value - mean_[col]) * inv_sd_[col];
    }
    /// Standardizes a full matrix into a flat row-major buffer.
    std::vector<double> transform(const FeatureMatrix& x) const;

    double mean(std::size_t col) const { return mean_[col]; }
    double sd(std::size_t col) const { return 1.0 / inv_sd_[col]; }

private:
    std::vector<double> mean_;
    std::vector<double> inv_sd_;  // 1/sd, with constant columns mapped to 1
};

/// Common face of the model families. Fitted models are immutable and safe
/// to share across threads; predictions always lie in [0,1].
class ProbClassifier {
public:
    virtual ~ProbClassifier() = default;

    const std::string& name() const { return name_; }
    bool fitted() const { return fitted_; }
    virtual std::map<std::string, double> hyperparameters() const = 0;

    /// Validates the training matrix (non-empty, both classes present unless
    /// the model declares otherwise) and dispatches to the model family.
    void fit(const FeatureMatrix& train);

    /// Per-row home-win probability. Callable before fit only for models
    /// that need no training (HomeWin).
    std::vector<double> predict(const FeatureMatrix& x) const;

    /// predict() wrapped together with ids, labels and score differentials.
    PredictionSet predict_set(const FeatureMatrix& x) const;

protected:
    explicit ProbClassifier(std::string name, bool requires_fit = true,
                            bool requires_both_classes = true)
        : name_(std::move(name)),
          requires_fit_(requires_fit),
          requires_both_classes_(requires_both_classes) {}

    virtual void do_fit(const FeatureMatrix& train) = 0;
    virtual std::vector<double> do_predict(const FeatureMatrix& x) const = 0;

private:
    std::string name_;
    bool requires_fit_;
    bool requires_both_classes_;
    bool fitted_ = false;
};

}  // namespace runline::models
