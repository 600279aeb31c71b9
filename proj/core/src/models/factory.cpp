#include "runline/models/factory.hpp"

#include <cmath>
#include <functional>
#include <set>

#include "runline/error.hpp"
#include "runline/models/gbdt.hpp"
#include "runline/models/homewin.hpp"
#include "runline/models/knn.hpp"
#include "runline/models/logistic_regression.hpp"
#include "runline/models/neural_net.hpp"
#include "runline/models/svm.hpp"

namespace runline::models {

namespace {

class ParamReader {
public:
    ParamReader(const std::string& family, const HyperParams& params)
        : family_(family), params_(params) {}

    double get(const std::string& name, double fallback) {
        used_.insert(name);
        auto it = params_.find(name);
        return it == params_.end() ? fallback : it->second;
    }
    int get_int(const std::string& name, int fallback) {
        const double v = get(name, fallback);
        if (v != std::floor(v)) {
            throw ConfigError(family_ + ": parameter '" + name + "' must be an integer");
        }
        return static_cast<int>(v);
    }
    bool get_bool(const std::string& name, bool fallback) {
        return get(name, fallback ? 1.0 : 0.0) != 0.0;
    }
    void finish() const {
        for (const auto& [name, value] : params_) {
            if (!used_.count(name)) {
                std::string known;
                for (const auto& u : used_) known += (known.empty() ? "" : ", ") + u;
                throw ConfigError(family_ + ": unknown hyperparameter '" + name +
                                  "' (known: " + known + ")");
            }
        }
    }

private:
    std::string family_;
    const HyperParams& params_;
    std::set<std::string> used_;
};

}  // namespace

bool is_matrix_family(const std::string& family) {
    static const std::set<std::string> families = {"homewin", "logr", "knn",
                                                   "svm",     "gbdt", "ann"};
    return families.count(family) > 0;
}

std::unique_ptr<ProbClassifier> make_classifier(const std::string& family,
                                                const HyperParams& params,
                                                std::uint64_t seed) {
    ParamReader reader(family, params);
    if (family == "homewin") {
        reader.finish();
        return std::make_unique<HomeWinModel>();
    }
    if (family == "logr") {
        LogrConfig config;
        config.learning_rate = reader.get("learning_rate", config.learning_rate);
        config.epochs = reader.get_int("epochs", config.epochs);
        config.l2 = reader.get("l2", config.l2);
        config.standardize = reader.get_bool("standardize", config.standardize);
        reader.finish();
        return std::make_unique<LogisticRegression>(config);
    }
    if (family == "knn") {
        KnnConfig config;
        config.k = reader.get_int("k", config.k);
        config.minkowski_p = reader.get("minkowski_p", config.minkowski_p);
        config.standardize = reader.get_bool("standardize", config.standardize);
        reader.finish();
        return std::make_unique<KnnClassifier>(config);
    }
    if (family == "svm") {
        SvmConfig config;
        config.seed = seed == 0 ? config.seed : seed;
        config.c = reader.get("c", config.c);
        config.gamma = reader.get("gamma", config.gamma);
        config.subsample_cap = reader.get_int("subsample_cap", config.subsample_cap);
        config.tol = reader.get("tol", config.tol);
        config.standardize = reader.get_bool("standardize", config.standardize);
        reader.finish();
        return std::make_unique<SvmClassifier>(config);
    }
    if (family == "gbdt") {
        GbdtConfig config;
        config.rounds = reader.get_int("rounds", config.rounds);
        config.depth = reader.get_int("depth", config.depth);
        config.learning_rate = reader.get("learning_rate", config.learning_rate);
        config.l2_leaf = reader.get("l2_leaf", config.l2_leaf);
        reader.finish();
        return std::make_unique<GbdtClassifier>(config);
    }
    if (family == "ann") {
        AnnConfig config;
        config.seed = seed;
        const int hidden = reader.get_int("hidden_size", 64);
        const int layers = reader.get_int("hidden_layers", 1);
        if (layers < 1) throw ConfigError("ann: hidden_layers must be >= 1");
        config.hidden_sizes.assign(static_cast<std::size_t>(layers), hidden);
        config.epochs = reader.get_int("epochs", config.epochs);
        config.learning_rate = reader.get("learning_rate", config.learning_rate);
        config.batch_size = reader.get_int("batch_size", config.batch_size);
        config.standardize = reader.get_bool("standardize", config.standardize);
        reader.finish();
        return std::make_unique<NeuralNetClassifier>(config);
    }
    throw ConfigError("unknown model family '" + family +
                      "' (matrix families: homewin, logr, knn, svm, gbdt, ann)");
}

}  // namespace runline::models
