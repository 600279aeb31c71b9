#pragma once

#include <cstdint>

#include "runline/models/classifier.hpp"

namespace runline::models {

struct SvmConfig {
    double c = 1.0;            // paper's grid-search optimum
    double gamma = 0.0;        // RBF width; 0 means 1/n_features
    int subsample_cap = 5000;  // stratified cap keeps kernel methods desk-scale
    double tol = 1e-3;         // KKT tolerance
    int max_passes = 5;        // full no-change passes before declaring converged
    long long max_kernel_evals = 400'000'000;  // iteration budget
    double platt_holdout = 0.2;
    bool standardize = true;
    std::uint64_t seed = 13;
};

/// RBF-kernel support vector machine trained with pairwise (SMO-style)
/// optimization. Decision values are mapped to probabilities by Platt
/// scaling fitted on an internal holdout slice, so the sigmoid never sees
/// the decision values of the rows it was trained on.
class SvmClassifier : public ProbClassifier {
public:
    explicit SvmClassifier(SvmConfig config = {});

    std::map<std::string, double> hyperparameters() const override;

    /// Signed distance-like score for one (unstandardized) feature row.
    double decision_value(const double* row, std::size_t dim) const;

    /// Largest KKT violation over the training subsample at convergence.
    double max_kkt_violation() const;

    /// Platt sigmoid p = sigmoid(a*f + b); a > 0 keeps p monotone in f.
    std::pair<double, double> platt_params() const { return {platt_a_, platt_b_}; }

protected:
    void do_fit(const FeatureMatrix& train) override;
    std::vector<double> do_predict(const FeatureMatrix& x) const override;

private:
    struct SmoResult {
        std::vector<double> alpha;
        double bias = 0.0;
    };
    double kernel(const double* a, const double* b) const;
    SmoResult run_smo(const std::vector<double>& x, const std::vector<double>& y,
                      std::uint64_t seed) const;
    double decision_std(const std::vector<double>& x, const std::vector<double>& y,
                        const SmoResult& smo, const double* row) const;

    SvmConfig config_;
    Standardizer scaler_;
    std::size_t dim_ = 0;
    double gamma_ = 0.0;
    std::vector<double> sv_values_;  // standardized support vectors, row-major
    std::vector<double> sv_coeff_;   // alpha_i * y_i
    double bias_ = 0.0;
    double platt_a_ = 1.0;
    double platt_b_ = 0.0;
    double max_kkt_violation_ = 0.0;
};

}  // namespace runline::models
