#include "runline/models/neural_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "runline/error.hpp"
#include "runline/math.hpp"

namespace runline::models {

namespace {
constexpr double kProbClamp = 1e-12;
}

NeuralNetClassifier::NeuralNetClassifier(AnnConfig config)
    : ProbClassifier("ann"), config_(std::move(config)) {
    if (config_.hidden_sizes.empty()) {
        throw ConfigError("ann: at least one hidden layer required (use logr instead)");
    }
    for (int h : config_.hidden_sizes) {
        if (h < 1) throw ConfigError("ann: hidden layer sizes must be positive");
    }
    if (config_.epochs < 0) throw ConfigError("ann: epochs must be >= 0");
    if (config_.batch_size < 1) throw ConfigError("ann: batch_size must be >= 1");
    if (config_.learning_rate <= 0) throw ConfigError("ann: learning_rate must be > 0");
}

std::map<std::string, double> NeuralNetClassifier::hyperparameters() const {
    std::map<std::string, double> params = {
        {"epochs", static_cast<double>(config_.epochs)},
        {"learning_rate", config_.learning_rate},
        {"batch_size", static_cast<double>(config_.batch_size)},
        {"hidden_layers", static_cast<double>(config_.hidden_sizes.size())},
        {"seed", static_cast<double>(config_.seed)}};
    params["hidden_size"] = static_cast<double>(config_.hidden_sizes.front());
    return params;
}

void NeuralNetClassifier::initialize(std::size_t n_features) {
    if (n_features == 0) throw ConfigError("ann: zero input features");
    dim_ = n_features;
    use_scaler_ = false;
    layers_.clear();
    std::mt19937_64 rng(config_.seed);
    std::size_t fan_in = n_features;
    std::vector<std::size_t> widths;
    for (int h : config_.hidden_sizes) widths.push_back(static_cast<std::size_t>(h));
    widths.push_back(1);
    for (std::size_t w : widths) {
        Layer layer;
        layer.in = fan_in;
        layer.out = w;
        layer.weights.resize(w * fan_in);
        layer.bias.assign(w, 0.0);
        // Xavier/Glorot scaling suits the sigmoid units.
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + w));
        std::uniform_real_distribution<double> u(-limit, limit);
        for (double& v : layer.weights) v = u(rng);
        layers_.push_back(std::move(layer));
        fan_in = w;
    }
}

std::vector<double> NeuralNetClassifier::parameters() const {
    std::vector<double> flat;
    for (const auto& layer : layers_) {
        flat.insert(flat.end(), layer.weights.begin(), layer.weights.end());
        flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
    }
    return flat;
}

void NeuralNetClassifier::set_parameters(const std::vector<double>& flat) {
    std::size_t offset = 0;
    for (auto& layer : layers_) {
        if (offset + layer.weights.size() + layer.bias.size() > flat.size()) {
            throw ConfigError("ann: parameter vector too short");
        }
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset),
                    layer.weights.size(), layer.weights.begin());
        offset += layer.weights.size();
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset),
                    layer.bias.size(), layer.bias.begin());
        offset += layer.bias.size();
    }
    if (offset != flat.size()) {
        throw ConfigError("ann: parameter vector has wrong length");
    }
}

double NeuralNetClassifier::forward(
    const double* row, std::vector<std::vector<double>>* activations) const {
    std::vector<double> current(row, row + dim_);
    if (activations) activations->push_back(current);
    for (const auto& layer : layers_) {
        std::vector<double> next(layer.out);
        for (std::size_t o = 0; o < layer.out; ++o) {
            double s = layer.bias[o];
            const double* w = layer.weights.data() + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) s += w[i] * current[i];
            next[o] = sigmoid(s);
        }
        current = std::move(next);
        if (activations) activations->push_back(current);
    }
    return current.front();
}

std::vector<double> NeuralNetClassifier::standardize_rows(const FeatureMatrix& x) const {
    if (!use_scaler_) return x.values;
    return scaler_.transform(x);
}

double NeuralNetClassifier::batch_loss(const FeatureMatrix& batch) const {
    if (layers_.empty()) throw ConfigError("ann: not initialized");
    if (batch.cols() != dim_) throw ConfigError("ann: feature dimension mismatch");
    const auto rows = standardize_rows(batch);
    double loss = 0.0;
    for (std::size_t r = 0; r < batch.rows(); ++r) {
        const double p = std::clamp(forward(rows.data() + r * dim_, nullptr),
                                    kProbClamp, 1.0 - kProbClamp);
        loss += batch.labels[r] ? -std::log(p) : -std::log1p(-p);
    }
    return loss / static_cast<double>(batch.rows());
}

void NeuralNetClassifier::accumulate_gradient(const double* row, double label,
                                              std::vector<Layer>& grads) const {
    std::vector<std::vector<double>> acts;
    acts.reserve(layers_.size() + 1);
    const double p = forward(row, &acts);

    // dL/dz for the output sigmoid + cross entropy collapses to (p - y).
    std::vector<double> delta = {p - label};
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const Layer& layer = layers_[l];
        const auto& input = acts[l];
        auto& g = grads[l];
        for (std::size_t o = 0; o < layer.out; ++o) {
            g.bias[o] += delta[o];
            double* gw = g.weights.data() + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) gw[i] += delta[o] * input[i];
        }
        if (l == 0) break;
        std::vector<double> prev(layer.in, 0.0);
        for (std::size_t i = 0; i < layer.in; ++i) {
            double s = 0.0;
            for (std::size_t o = 0; o < layer.out; ++o) {
                s += layer.weights[o * layer.in + i] * delta[o];
            }
            const double a = input[i];
            prev[i] = s * a * (1.0 - a);  // sigmoid'(z) = a(1-a)
        }
        delta = std::move(prev);
    }
}

std::vector<double> NeuralNetClassifier::batch_gradient(const FeatureMatrix& batch) const {
    if (layers_.empty()) throw ConfigError("ann: not initialized");
    if (batch.cols() != dim_) throw ConfigError("ann: feature dimension mismatch");
    const auto rows = standardize_rows(batch);
    std::vector<Layer> grads;
    for (const auto& layer : layers_) {
        Layer g;
        g.in = layer.in;
        g.out = layer.out;
        g.weights.assign(layer.weights.size(), 0.0);
        g.bias.assign(layer.bias.size(), 0.0);
        grads.push_back(std::move(g));
    }
    for (std::size_t r = 0; r < batch.rows(); ++r) {
        accumulate_gradient(rows.data() + r * dim_,
                            static_cast<double>(batch.labels[r]), grads);
    }
    const double inv_n = 1.0 / static_cast<double>(batch.rows());
    std::vector<double> flat;
    for (const auto& g : grads) {
        for (double v : g.weights) flat.push_back(v * inv_n);
        for (double v : g.bias) flat.push_back(v * inv_n);
    }
    return flat;
}

double NeuralNetClassifier::run_batch(const std::vector<double>& rows,
                                      const std::vector<std::uint8_t>& labels,
                                      const std::vector<std::size_t>& batch,
                                      double lr) {
    std::vector<Layer> grads;
    for (const auto& layer : layers_) {
        Layer g;
        g.in = layer.in;
        g.out = layer.out;
        g.weights.assign(layer.weights.size(), 0.0);
        g.bias.assign(layer.bias.size(), 0.0);
        grads.push_back(std::move(g));
    }
    for (std::size_t r : batch) {
        accumulate_gradient(rows.data() + r * dim_, static_cast<double>(labels[r]),
                            grads);
    }
    const double scale = lr / static_cast<double>(batch.size());
    double grad_norm = 0.0;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        for (std::size_t i = 0; i < layers_[l].weights.size(); ++i) {
            layers_[l].weights[i] -= scale * grads[l].weights[i];
            grad_norm += grads[l].weights[i] * grads[l].weights[i];
        }
        for (std::size_t i = 0; i < layers_[l].bias.size(); ++i) {
            layers_[l].bias[i] -= scale * grads[l].bias[i];
            grad_norm += grads[l].bias[i] * grads[l].bias[i];
        }
    }
    return grad_norm;
}

void NeuralNetClassifier::do_fit(const FeatureMatrix& train) {
    initialize(train.cols());
    if (config_.standardize) {
        scaler_ = Standardizer();
        scaler_.fit(train);
        use_scaler_ = true;
    }
    const auto rows = standardize_rows(train);
    const std::size_t n = train.rows();

    std::mt19937_64 shuffle_rng(config_.seed ^ 0xc2b2ae3d27d4eb4fULL);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    loss_history_.clear();
    loss_history_.push_back(batch_loss(train));
    for (int epoch = 0; epoch < config_.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        for (std::size_t start = 0; start < n;
             start += static_cast<std::size_t>(config_.batch_size)) {
            const std::size_t stop =
                std::min(n, start + static_cast<std::size_t>(config_.batch_size));
            std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                           order.begin() + static_cast<std::ptrdiff_t>(stop));
            run_batch(rows, train.labels, batch, config_.learning_rate);
        }
        const double loss = batch_loss(train);
        if (!std::isfinite(loss)) {
            throw Error("ann: training diverged (non-finite loss at epoch " +
                        std::to_string(epoch) + "); lower the learning rate");
        }
        loss_history_.push_back(loss);
    }
}

std::vector<double> NeuralNetClassifier::do_predict(const FeatureMatrix& x) const {
    if (x.cols() != dim_) {
        throw ConfigError("ann: expected " + std::to_string(dim_) + " features, got " +
                          std::to_string(x.cols()));
    }
    const auto rows = standardize_rows(x);
    std::vector<double> probs(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        probs[r] = forward(rows.data() + r * dim_, nullptr);
    }
    return probs;
}

}  // namespace runline::models
