#pragma once

#include <array>
#include <string>
#include <vector>

#include "runline/prediction.hpp"

namespace runline::ensemble {

/// Fraction of games on which each model pair makes the same thresholded
/// call. Symmetric with a unit diagonal.
struct AgreementMatrix {
    std::vector<std::string> model_names;
    std::vector<double> agree_fraction;  // row-major, n x n

    double at(std::size_t i, std::size_t j) const {
        return agree_fraction[i * model_names.size() + j];
    }
};

struct TripletResult {
    std::array<std::string, 3> models;
    double majority_accuracy = 0.0;
    double oracle_accuracy = 0.0;
};

/// All sets must cover the same game_id sequence; mismatches throw.
AgreementMatrix agreement_matrix(const std::vector<PredictionSet>& preds,
                                 double threshold = 0.5);

/// 2-of-3 thresholded vote. The vote decides the class; the emitted p_home
/// is the (optionally weighted) mean of the inputs and exists only so
/// downstream strength analyses stay usable. Accuracy of the vote itself
/// comes from majority_vote_accuracy, not from thresholding the mean.
PredictionSet majority_vote(const PredictionSet& a, const PredictionSet& b,
                            const PredictionSet& c, double threshold = 0.5,
                            const std::vector<double>& weights = {});

/// Fraction of games where the (optionally weighted) vote matches the label.
double majority_vote_accuracy(const PredictionSet& a, const PredictionSet& b,
                              const PredictionSet& c, double threshold = 0.5,
                              const std::vector<double>& weights = {});

/// Fraction of games where at least one model's thresholded call is right.
double oracle_accuracy(const std::vector<PredictionSet>& preds,
                       double threshold = 0.5);

/// One TripletResult per 3-combination, models in lexicographic name order.
std::vector<TripletResult> triplet_table(const std::vector<PredictionSet>& preds,
                                         double threshold = 0.5);

/// Square CSV with a model-name header row and column.
void write_agreement_csv(const AgreementMatrix& matrix, const std::string& path);
/// model_1,model_2,model_3,majority_accuracy,oracle_accuracy.
void write_triplets_csv(const std::vector<TripletResult>& triplets,
                        const std::string& path);

}  // namespace runline::ensemble
