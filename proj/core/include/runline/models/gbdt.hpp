#pragma once

#include "runline/models/classifier.hpp"

namespace runline::models {

struct GbdtConfig {
    int rounds = 200;
    int depth = 4;
    double learning_rate = 0.1;
    double l2_leaf = 1.0;
    int min_samples_split = 2;
};

/// Gradient-boosted regression trees on logistic loss. Trees are grown
/// greedily with exact split search on gradient/hessian sums; leaf values are
/// -G/(H + l2_leaf). The raw score starts at the log-odds of the training
/// base rate, so learning_rate = 0 predicts the prior everywhere. A tree that
/// would raise the training loss is damped (leaf scale halved) before being
/// accepted, which keeps the recorded per-round loss non-increasing.
class GbdtClassifier : public ProbClassifier {
public:
    explicit GbdtClassifier(GbdtConfig config = {});

    std::map<std::string, double> hyperparameters() const override;

    /// Training log-loss after each round (entry 0 = prior-only model).
    const std::vector<double>& loss_history() const { return loss_history_; }

    struct Node {
        int feature = -1;       // -1 marks a leaf
        double threshold = 0.0;  // go left when value < threshold
        int left = -1;
        int right = -1;
        double value = 0.0;  // leaf weight
        bool is_leaf() const { return feature < 0; }
    };
    struct Tree {
        std::vector<Node> nodes;
        double predict(const double* row) const;
    };

    /// First tree's root split, for split-search verification. Throws when
    /// the first tree is a stump.
    std::pair<int, double> first_split() const;

    const std::vector<Tree>& trees() const { return trees_; }
    double base_score() const { return base_score_; }

protected:
    void do_fit(const FeatureMatrix& train) override;
    std::vector<double> do_predict(const FeatureMatrix& x) const override;

private:
    struct SplitChoice {
        bool found = false;
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };
    SplitChoice best_split(const FeatureMatrix& x,
                           const std::vector<std::size_t>& rows,
                           const std::vector<double>& grad,
                           const std::vector<double>& hess) const;
    int grow(const FeatureMatrix& x, std::vector<std::size_t> rows,
             const std::vector<double>& grad, const std::vector<double>& hess,
             int depth_left, Tree& tree) const;

    GbdtConfig config_;
    double base_score_ = 0.0;
    std::vector<Tree> trees_;
    std::vector<double> loss_history_;
    std::size_t dim_ = 0;
};

}  // namespace runline::models
