#pragma once

namespace runline::features {

/// Guard for pct_diff denominators.
inline constexpr double kPctDiffEpsilon = 1e-9;

/// (home - away) / max(|away|, eps). "Home relative to away" with a guarded
/// denominator so zero-valued stats stay finite.
double pct_diff(double home_value, double away_value);

/// home - away.
inline double raw_diff(double home_value, double away_value) {
    return home_value - away_value;
}

/// Pythagorean expectation RS^2 / (RS^2 + RA^2). Throws ConfigError when both
/// inputs are zero.
double pythagorean(double runs_scored, double runs_allowed);

/// Bill James Log5 head-to-head probability:
///   (pa - pa*pb) / (pa + pb - 2*pa*pb)
/// Requires pa, pb in (0,1); degenerate denominators throw ConfigError.
double log5(double p_a, double p_b);

}  // namespace runline::features
