#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "runline/models/classifier.hpp"

namespace runline::models {

using HyperParams = std::map<std::string, double>;

/// Families that train on a FeatureMatrix: homewin, logr, knn, svm, gbdt,
/// ann. (elo consumes game records directly and is built elsewhere.)
/// Unknown family or parameter names throw ConfigError listing the options.
std::unique_ptr<ProbClassifier> make_classifier(const std::string& family,
                                                const HyperParams& params = {},
                                                std::uint64_t seed = 0);

bool is_matrix_family(const std::string& family);

}  // namespace runline::models
