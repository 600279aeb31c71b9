#include "runline/models/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "runline/error.hpp"
#include "runline/math.hpp"

namespace runline::models {

namespace {

constexpr double kProbClamp = 1e-12;
constexpr double kMinGain = 1e-12;

double mean_log_loss(const std::vector<double>& raw,
                     const std::vector<std::uint8_t>& y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double p = std::clamp(sigmoid(raw[i]), kProbClamp, 1.0 - kProbClamp);
        loss += y[i] ? -std::log(p) : -std::log1p(-p);
    }
    return loss / static_cast<double>(raw.size());
}

}  // namespace

GbdtClassifier::GbdtClassifier(GbdtConfig config)
    : ProbClassifier("gbdt"), config_(config) {
    if (config_.rounds < 1) throw ConfigError("gbdt: rounds must be >= 1");
    if (config_.depth < 1) throw ConfigError("gbdt: depth must be >= 1");
    if (config_.learning_rate < 0) throw ConfigError("gbdt: learning_rate must be >= 0");
    if (config_.l2_leaf < 0) throw ConfigError("gbdt: l2_leaf must be >= 0");
}

std::map<std::string, double> GbdtClassifier::hyperparameters() const {
    return {{"rounds", static_cast<double>(config_.rounds)},
            {"depth", static_cast<double>(config_.depth)},
            {"learning_rate", config_.learning_rate},
            {"l2_leaf", config_.l2_leaf}};
}

double GbdtClassifier::Tree::predict(const double* row) const {
    int node = 0;
    while (!nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const Node& n = nodes[static_cast<std::size_t>(node)];
        node = row[n.feature] < n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].value;
}

GbdtClassifier::SplitChoice GbdtClassifier::best_split(
    const FeatureMatrix& x, const std::vector<std::size_t>& rows,
    const std::vector<double>& grad, const std::vector<double>& hess) const {
    SplitChoice best;
    if (rows.size() < static_cast<std::size_t>(config_.min_samples_split)) return best;

    double g_total = 0.0, h_total = 0.0;
    for (std::size_t r : rows) {
        g_total += grad[r];
        h_total += hess[r];
    }
    const double lambda = config_.l2_leaf;
    const double parent_score = g_total * g_total / (h_total + lambda);

    std::vector<std::pair<double, std::size_t>> sorted(rows.size());
    for (std::size_t f = 0; f < x.cols(); ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            sorted[i] = {x.at(rows[i], f), rows[i]};
        }
        std::sort(sorted.begin(), sorted.end());
        double g_left = 0.0, h_left = 0.0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            g_left += grad[sorted[i].second];
            h_left += hess[sorted[i].second];
            if (sorted[i].first == sorted[i + 1].first) continue;  // no boundary here
            const double g_right = g_total - g_left;
            const double h_right = h_total - h_left;
            const double gain =
                0.5 * (g_left * g_left / (h_left + lambda) +
                       g_right * g_right / (h_right + lambda) - parent_score);
            if (gain > best.gain + kMinGain || !best.found) {
                if (gain <= kMinGain) continue;
                best.found = true;
                best.gain = gain;
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
            }
        }
    }
    return best;
}

int GbdtClassifier::grow(const FeatureMatrix& x, std::vector<std::size_t> rows,
                         const std::vector<double>& grad,
                         const std::vector<double>& hess, int depth_left,
                         Tree& tree) const {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    SplitChoice split;
    if (depth_left > 0) split = best_split(x, rows, grad, hess);
    if (!split.found) {
        double g = 0.0, h = 0.0;
        for (std::size_t r : rows) {
            g += grad[r];
            h += hess[r];
        }
        tree.nodes[static_cast<std::size_t>(index)].value = -g / (h + config_.l2_leaf);
        return index;
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
        (x.at(r, static_cast<std::size_t>(split.feature)) < split.threshold
             ? left_rows
             : right_rows)
            .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const int left = grow(x, std::move(left_rows), grad, hess, depth_left - 1, tree);
    const int right = grow(x, std::move(right_rows), grad, hess, depth_left - 1, tree);
    Node& node = tree.nodes[static_cast<std::size_t>(index)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return index;
}

void GbdtClassifier::do_fit(const FeatureMatrix& train) {
    const std::size_t n = train.rows();
    dim_ = train.cols();
    trees_.clear();
    loss_history_.clear();

    double base_rate = 0.0;
    for (std::uint8_t y : train.labels) base_rate += y;
    base_rate = std::clamp(base_rate / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
    base_score_ = std::log(base_rate / (1.0 - base_rate));

    std::vector<double> raw(n, base_score_);
    double loss = mean_log_loss(raw, train.labels);
    loss_history_.push_back(loss);

    std::vector<double> grad(n), hess(n);
    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);

    for (int round = 0; round < config_.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(raw[i]);
            grad[i] = p - static_cast<double>(train.labels[i]);
            hess[i] = std::max(p * (1.0 - p), 1e-16);
        }
        Tree tree;
        grow(train, all_rows, grad, hess, config_.depth, tree);

        // Damp a tree that would raise the training loss (rare; curvature
        // overshoot). learning_rate = 0 keeps raw untouched by construction.
        std::vector<double> contribution(n);
        for (std::size_t i = 0; i < n; ++i) {
            contribution[i] = tree.predict(train.row_ptr(i));
        }
        double scale = config_.learning_rate;
        std::vector<double> raw_try(n);
        bool accepted = config_.learning_rate == 0.0;
        for (int attempt = 0; !accepted && attempt < 12; ++attempt) {
            for (std::size_t i = 0; i < n; ++i) {
                raw_try[i] = raw[i] + scale * contribution[i];
            }
            const double new_loss = mean_log_loss(raw_try, train.labels);
            if (new_loss <= loss) {
                raw.swap(raw_try);
                loss = new_loss;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (accepted && config_.learning_rate > 0.0 && scale != config_.learning_rate) {
            for (auto& node : tree.nodes) {
                if (node.is_leaf()) node.value *= scale / config_.learning_rate;
            }
        }
        if (!accepted) {
            // No damping helps: the model is at a stationary point.
            loss_history_.push_back(loss);
            trees_.push_back(std::move(tree));  // zero-effect via scale below
            for (auto& node : trees_.back().nodes) {
                if (node.is_leaf()) node.value = 0.0;
            }
            continue;
        }
        loss_history_.push_back(loss);
        trees_.push_back(std::move(tree));
    }
}

std::vector<double> GbdtClassifier::do_predict(const FeatureMatrix& x) const {
    if (x.cols() != dim_) {
        throw ConfigError("gbdt: expected " + std::to_string(dim_) + " features, got " +
                          std::to_string(x.cols()));
    }
    std::vector<double> probs(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        double raw = base_score_;
        const double* row = x.row_ptr(r);
        for (const auto& tree : trees_) {
            raw += config_.learning_rate * tree.predict(row);
        }
        probs[r] = sigmoid(raw);
    }
    return probs;
}

std::pair<int, double> GbdtClassifier::first_split() const {
    if (!fitted() || trees_.empty()) throw ConfigError("gbdt: no trees fitted");
    const Node& root = trees_.front().nodes.front();
    if (root.is_leaf()) throw ConfigError("gbdt: first tree is a stump");
    return {root.feature, root.threshold};
}

}  // namespace runline::models
