#include "runline/features/transforms.hpp"

#include <cmath>
#include <string>

#include "runline/error.hpp"

namespace runline::features {

double pct_diff(double home_value, double away_value) {
    const double denom = std::max(std::abs(away_value), kPctDiffEpsilon);
    return (home_value - away_value) / denom;
}

double pythagorean(double runs_scored, double runs_allowed) {
    if (runs_scored == 0.0 && runs_allowed == 0.0) {
        throw ConfigError("pythagorean: runs scored and allowed are both zero");
    }
    const double rs2 = runs_scored * runs_scored;
    const double ra2 = runs_allowed * runs_allowed;
    return rs2 / (rs2 + ra2);
}

double log5(double p_a, double p_b) {
    if (!(p_a > 0.0 && p_a < 1.0) || !(p_b > 0.0 && p_b < 1.0)) {
        throw ConfigError("log5: probabilities must lie strictly inside (0,1), got " +
                          std::to_string(p_a) + ", " + std::to_string(p_b));
    }
    const double denom = p_a + p_b - 2.0 * p_a * p_b;
    if (std::abs(denom) < 1e-15) {
        throw ConfigError("log5: degenerate denominator");
    }
    return (p_a - p_a * p_b) / denom;
}

}  // namespace runline::features
