#pragma once

#include <cstdint>

#include "runline/models/classifier.hpp"

namespace runline::models {

struct AnnConfig {
    std::vector<int> hidden_sizes = {64};
    int epochs = 60;
    double learning_rate = 0.3;
    int batch_size = 32;
    bool standardize = true;
    std::uint64_t seed = 0;
};

/// Fully connected feed-forward network: sigmoid hidden units (stacked
/// logistic regressions), sigmoid output, logistic loss, mini-batch gradient
/// descent. Deterministic under a fixed seed. Training aborts with a
/// diagnostic if the loss ever becomes non-finite.
class NeuralNetClassifier : public ProbClassifier {
public:
    explicit NeuralNetClassifier(AnnConfig config = {});

    std::map<std::string, double> hyperparameters() const override;

    /// Builds seeded initial weights for `n_features` inputs without
    /// training; lets tests probe gradients at initialization.
    void initialize(std::size_t n_features);

    /// Flat view of all weights and biases, layer by layer.
    std::vector<double> parameters() const;
    void set_parameters(const std::vector<double>& flat);

    /// Mean logistic loss of the current weights on `batch` (standardization
    /// applied only when the model was fitted, so probes at initialization
    /// see the raw features the analytic gradient sees).
    double batch_loss(const FeatureMatrix& batch) const;

    /// Analytic gradient of batch_loss with respect to parameters().
    std::vector<double> batch_gradient(const FeatureMatrix& batch) const;

    const std::vector<double>& loss_history() const { return loss_history_; }

protected:
    void do_fit(const FeatureMatrix& train) override;
    std::vector<double> do_predict(const FeatureMatrix& x) const override;

private:
    struct Layer {
        std::size_t in = 0;
        std::size_t out = 0;
        std::vector<double> weights;  // out x in, row-major
        std::vector<double> bias;     // out
    };

    std::vector<double> standardize_rows(const FeatureMatrix& x) const;
    double forward(const double* row, std::vector<std::vector<double>>* activations) const;
    void accumulate_gradient(const double* row, double label,
                             std::vector<Layer>& grads) const;
    double run_batch(const std::vector<double>& rows,
                     const std::vector<std::uint8_t>& labels,
                     const std::vector<std::size_t>& batch, double lr);

    AnnConfig config_;
    Standardizer scaler_;
    bool use_scaler_ = false;
    std::vector<Layer> layers_;
    std::vector<double> loss_history_;
    std::size_t dim_ = 0;
};

}  // namespace runline::models
