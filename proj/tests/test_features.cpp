#include <doctest.h>

#include <cmath>
#include <random>

#include "runline/data/synthetic.hpp"
#include "runline/error.hpp"
#include "runline/features/elo.hpp"
#include "runline/features/feature_matrix.hpp"
#include "runline/features/stats_store.hpp"
#include "runline/features/transforms.hpp"
#include "runline/pipeline/runner.hpp"
#include "test_util.hpp"

using namespace runline;
using namespace runline::features;

TEST_SUITE_BEGIN("features");

TEST_CASE("pct_diff") {
    CHECK(pct_diff(0.800, 0.800) == 0.0);
    CHECK(pct_diff(0.900, 0.750) == doctest::Approx(0.2).epsilon(1e-12));
    // Degenerate denominator engages the epsilon guard and stays finite.
    const double guarded = pct_diff(0.5, 0.0);
    CHECK(std::isfinite(guarded));
    CHECK(guarded == doctest::Approx(0.5 / kPctDiffEpsilon));
}

TEST_CASE("raw_diff and antisymmetry") {
    CHECK(raw_diff(0.350, 0.300) == doctest::Approx(0.050).epsilon(1e-12));
    CHECK(raw_diff(1.25, 1.25) == 0.0);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        CHECK(raw_diff(a, b) == -raw_diff(b, a));
        // pct_diff normalizes by the away side, so only the sign flips.
        if (std::abs(a - b) > 1e-9) {
            CHECK(std::signbit(pct_diff(a, b)) != std::signbit(pct_diff(b, a)));
        }
    }
}

TEST_CASE("pythagorean expectation") {
    CHECK(pythagorean(700, 700) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pythagorean(800, 600) == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(pythagorean(0, 500) == 0.0);
    CHECK_THROWS_AS(pythagorean(0, 0), ConfigError);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(1.0, 1000.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        CHECK(pythagorean(a, b) + pythagorean(b, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("log5") {
    CHECK(log5(0.7, 0.7) == doctest::Approx(0.5).epsilon(1e-12));
    // A .500 opponent leaves the team's own win probability unchanged.
    CHECK(log5(0.6, 0.5) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK_THROWS_AS(log5(0.0, 0.5), ConfigError);
    CHECK_THROWS_AS(log5(0.5, 1.0), ConfigError);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        CHECK(log5(a, b) + log5(b, a) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

namespace {

StatsStore two_season_store() {
    std::vector<TeamSeasonStats> rows;
    rows.push_back({"NYA", 2014, Date{2014, 9, 30}, {{"ERA", 3.50}, {"R", 700.0}}});
    rows.push_back({"BOS", 2014, Date{2014, 9, 30}, {{"ERA", 4.10}, {"R", 650.0}}});
    rows.push_back({"HOU", 2014, Date{2014, 9, 30}, {{"ERA", 4.70}, {"R", 600.0}}});
    rows.push_back({"NYA", 2015, Date{2015, 3, 31}, {{"ERA", 3.80}, {"R", 690.0}}});
    rows.push_back({"BOS", 2015, Date{2015, 3, 31}, {{"ERA", 4.00}, {"R", 660.0}}});
    return StatsStore::from_rows(std::move(rows));
}

}  // namespace

TEST_CASE("offset_prev_season lookup and league-mean fallback") {
    const StatsStore store = two_season_store();
    CHECK(store.prev_season_value("NYA", 2015, "ERA") == doctest::Approx(3.50));

    // Expansion team: no 2014 row, league mean of 2014 applies.
    const double fallback = store.prev_season_value("ARI", 2015, "ERA");
    // Brute-force mean recomputed independently.
    const double expected = (3.50 + 4.10 + 4.70) / 3.0;
    CHECK(fallback == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(store.prev_season_value("NYA", 2015, "NoSuchStat"), ConfigError);
}

TEST_CASE("current_value honors as_of dates and flags lookahead") {
    std::vector<TeamSeasonStats> rows;
    rows.push_back({"NYA", 2015, Date{2015, 5, 1}, {{"ERA", 3.00}}});
    rows.push_back({"NYA", 2015, Date{2015, 6, 1}, {{"ERA", 3.40}}});
    const StatsStore store = StatsStore::from_rows(std::move(rows));

    // Latest snapshot strictly before the game date wins.
    CHECK(store.current_value("NYA", 2015, "ERA", Date{2015, 7, 1}) ==
          doctest::Approx(3.40));
    CHECK(store.current_value("NYA", 2015, "ERA", Date{2015, 5, 15}) ==
          doctest::Approx(3.00));
    // A snapshot dated on/after the game is a lookahead violation.
    CHECK_THROWS_WITH_AS(store.current_value("NYA", 2015, "ERA", Date{2015, 5, 1}),
                         doctest::Contains("lookahead"), Error);
}

TEST_CASE("pythagorean expectation derives from R and RA when absent") {
    std::vector<TeamSeasonStats> rows;
    rows.push_back({"NYA", 2015, Date{2015, 3, 31}, {{"R", 800.0}, {"RA", 600.0}}});
    const StatsStore store = StatsStore::from_rows(std::move(rows));
    CHECK(store.current_value("NYA", 2015, "Pythag", Date{2015, 6, 1}) ==
          doctest::Approx(0.64).epsilon(1e-12));
}

TEST_CASE("elo expectation and update") {
    EloState state;
    state.ratings = {{"NYA", 1500.0}, {"BOS", 1500.0}};
    state.home_advantage_points = 0.0;
    CHECK(elo_expected_home(state, "NYA", "BOS") == doctest::Approx(0.5).epsilon(1e-12));

    state.home_advantage_points = 24.0;
    const double expected = 1.0 / (1.0 + std::pow(10.0, -24.0 / 400.0));
    CHECK(elo_expected_home(state, "NYA", "BOS") ==
          doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(elo_expected_home(state, "NYA", "LAD"), ConfigError);
}

TEST_CASE("elo updates conserve total rating points") {
    EloState state;
    state.ratings = {{"A", 1520.0}, {"B", 1480.0}, {"C", 1500.0}};
    std::mt19937_64 rng(3);
    double total = 1520.0 + 1480.0 + 1500.0;
    const char* teams[] = {"A", "B", "C"};
    Date day{2019, 4, 1};
    for (int i = 0; i < 200; ++i) {
        const int h = static_cast<int>(rng() % 3);
        int a = static_cast<int>(rng() % 3);
        if (a == h) a = (a + 1) % 3;
        GameRecord g;
        g.game_id = "g" + std::to_string(i);
        g.date = day;
        g.season = 2019;
        g.home_team = teams[h];
        g.away_team = teams[a];
        g.home_score = (rng() % 2) ? 5 : 3;
        g.away_score = 4;
        state = elo_update(std::move(state), g, rng() % 3000, rng() % 5, rng() % 5);
        double sum = 0.0;
        for (const auto& [team, r] : state.ratings) sum += r;
        CHECK(sum == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("column spec parsing") {
    CHECK(parse_column_spec("OPSpctDiff").transform == Transform::kPctDiff);
    CHECK(parse_column_spec("OPSpctDiff").stat == "OPS");
    CHECK(parse_column_spec("OPSDiff").transform == Transform::kRawDiff);
    CHECK(parse_column_spec("OPSDiff").stat == "OPS");
    CHECK(parse_column_spec("FP-1").transform == Transform::kOffsetYear);
    CHECK(parse_column_spec("FP-1").stat == "FP");
    CHECK(parse_column_spec("W-L-1").stat == "W-L");
    CHECK(parse_column_spec("SP-IPpctDiff").stat == "SP-IP");
    CHECK(parse_column_spec("W-LpctDiff").stat == "W-L");
    CHECK(parse_column_spec("Y").transform == Transform::kYear);
    CHECK(parse_column_spec("M").transform == Transform::kMonth);
    CHECK(parse_column_spec("Log5").transform == Transform::kLog5);
    CHECK(parse_column_spec("RD").transform == Transform::kHomeValue);
    CHECK_THROWS_AS(parse_column_spec(""), ConfigError);
}

TEST_CASE("build_feature_matrix computes hand-checked OPSDiff cells") {
    std::vector<GameRecord> games;
    games.push_back({"g1", Date{2015, 6, 1}, 2015, "NYA", "BOS", 5, 3, false});
    games.push_back({"g2", Date{2015, 6, 2}, 2015, "BOS", "NYA", 2, 7, false});
    const Dataset data = Dataset::from_games(std::move(games));

    std::vector<TeamSeasonStats> rows;
    rows.push_back({"NYA", 2015, Date{2015, 3, 31}, {{"OPS", 0.780}}});
    rows.push_back({"BOS", 2015, Date{2015, 3, 31}, {{"OPS", 0.742}}});
    const StatsStore store = StatsStore::from_rows(std::move(rows));

    const auto matrix =
        build_feature_matrix(data, store, {parse_column_spec("OPSDiff")});
    REQUIRE(matrix.rows() == 2);
    REQUIRE(matrix.cols() == 1);
    CHECK(matrix.at(0, 0) == doctest::Approx(0.780 - 0.742).epsilon(1e-12));
    CHECK(matrix.at(1, 0) == doctest::Approx(0.742 - 0.780).epsilon(1e-12));
    CHECK(matrix.labels[0] == 1);
    CHECK(matrix.labels[1] == 0);
    CHECK(matrix.score_diffs[0] == 2);
    CHECK(matrix.score_diffs[1] == -5);
}

TEST_CASE("empty feature specs are rejected") {
    SyntheticConfig config;
    config.n_teams = 4;
    config.n_seasons = 1;
    config.games_per_team = 6;
    const auto synth = generate_synthetic(config);
    const auto stats = synthesize_team_stats(synth.latent, config.first_season,
                                             config.n_seasons, 1);
    CHECK_THROWS_AS(build_feature_matrix(synth.games, stats, {}), ConfigError);
}

TEST_CASE("the full published column list builds with no missing values") {
    SyntheticConfig config;
    config.n_teams = 8;
    config.n_seasons = 2;
    config.games_per_team = 20;
    config.seed = 21;
    const auto synth = generate_synthetic(config);
    const auto stats = synthesize_team_stats(synth.latent, config.first_season,
                                             config.n_seasons, 2);

    std::vector<ColumnSpec> spec;
    for (const auto& token : pipeline::builtin_feature_spec("paper")) {
        spec.push_back(parse_column_spec(token));
    }
    const auto matrix = build_feature_matrix(synth.games, stats, spec);
    CHECK(matrix.cols() == spec.size());
    CHECK(matrix.cols() == 53);  // Table-2 abbreviation list
    CHECK(matrix.rows() == synth.games.size());
    matrix.validate();  // finite, aligned, nonzero differentials

    // Determinism: rebuilding yields identical values.
    const auto again = build_feature_matrix(synth.games, stats, spec);
    CHECK(again.values == matrix.values);
}

TEST_CASE("lookahead stats abort the matrix build") {
    std::vector<GameRecord> games;
    games.push_back({"g1", Date{2015, 6, 1}, 2015, "NYA", "BOS", 5, 3, false});
    const Dataset data = Dataset::from_games(std::move(games));

    std::vector<TeamSeasonStats> rows;
    rows.push_back({"NYA", 2015, Date{2015, 7, 1}, {{"OPS", 0.780}}});  // future-dated
    rows.push_back({"BOS", 2015, Date{2015, 3, 31}, {{"OPS", 0.742}}});
    const StatsStore store = StatsStore::from_rows(std::move(rows));

    CHECK_THROWS_WITH_AS(
        build_feature_matrix(data, store, {parse_column_spec("OPSDiff")}),
        doctest::Contains("lookahead"), Error);
}

TEST_CASE("stats store CSV round trip") {
    testutil::TempDir tmp("stats");
    const StatsStore store = two_season_store();
    const std::string path = tmp.file("stats.csv");
    store.save_csv(path);
    const StatsStore back = StatsStore::load_csv(path);
    CHECK(back.size() == store.size());
    CHECK(back.prev_season_value("NYA", 2015, "ERA") == doctest::Approx(3.50));
    CHECK(back.current_value("BOS", 2015, "R", Date{2015, 6, 1}) ==
          doctest::Approx(660.0));
}

TEST_SUITE_END();
