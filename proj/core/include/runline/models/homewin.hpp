#pragma once

#include "runline/data/game.hpp"
#include "runline/models/classifier.hpp"

namespace runline::models {

/// Null model: always predicts the home side with probability 1. Its accuracy
/// equals the home-win base rate of whatever set it is evaluated on.
class HomeWinModel : public ProbClassifier {
public:
    HomeWinModel() : ProbClassifier("homewin", /*requires_fit=*/false,
                                    /*requires_both_classes=*/false) {}

    std::map<std::string, double> hyperparameters() const override { return {}; }

protected:
    void do_fit(const FeatureMatrix&) override {}
    std::vector<double> do_predict(const FeatureMatrix& x) const override {
        return std::vector<double>(x.rows(), 1.0);
    }
};

/// p_home = 1.0 for every game, straight off the schedule.
PredictionSet homewin_predict(const Dataset& games);

}  // namespace runline::models
