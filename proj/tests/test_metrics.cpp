#include <doctest.h>

#include <cmath>
#include <random>

#include "runline/error.hpp"
#include "runline/metrics/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace runline;
using namespace runline::metrics;

TEST_SUITE_BEGIN("metrics");

namespace {

/// Labels with an exact 53.15% home-win rate and constant p = 1 predictions:
/// the HomeWin model's evaluation set.
PredictionSet homewin_set_with_base_rate(std::size_t n, std::size_t home_wins) {
    std::vector<double> p(n, 1.0);
    std::vector<std::uint8_t> y(n, 0);
    for (std::size_t i = 0; i < home_wins; ++i) y[i] = 1;
    return testutil::make_preds(p, y, {}, "homewin");
}

}  // namespace

TEST_CASE("accuracy: perfect classifier and hand-counted 7-game set") {
    const auto perfect =
        testutil::make_preds({0.9, 0.8, 0.1, 0.2, 0.7}, {1, 1, 0, 0, 1});
    CHECK(accuracy(perfect) == 1.0);

    // By hand: calls are H,H,A,H,A,A,H vs labels 1,0,0,1,1,0,1 -> correct on
    // games 0,2,3,5,6 -> 5/7.
    const auto hand = testutil::make_preds({0.6, 0.7, 0.2, 0.5, 0.4, 0.3, 0.9},
                                           {1, 0, 0, 1, 1, 0, 1});
    CHECK(accuracy(hand) == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("accuracy: p equal to the threshold counts as a home call") {
    const auto preds = testutil::make_preds({0.5}, {1});
    CHECK(accuracy(preds, 0.5) == 1.0);
    const auto miss = testutil::make_preds({0.5}, {0});
    CHECK(accuracy(miss, 0.5) == 0.0);
}

TEST_CASE("auroc: constant predictor scores exactly one half") {
    const auto preds = testutil::make_preds({1.0, 1.0, 1.0, 1.0}, {1, 0, 1, 0});
    CHECK(auroc(preds) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("auroc: perfect ranking scores one") {
    const auto preds =
        testutil::make_preds({0.9, 0.8, 0.7, 0.2, 0.1}, {1, 1, 1, 0, 0});
    CHECK(auroc(preds) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("auroc: tie handling matches the all-pairs oracle") {
    const auto preds = testutil::make_preds(
        {0.5, 0.5, 0.5, 0.7, 0.7, 0.2, 0.2, 0.9, 0.1, 0.4, 0.4, 0.6},
        {1, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 0});
    CHECK(auroc(preds) == doctest::Approx(oracles::auroc_pairs(preds)).epsilon(1e-15));
}

TEST_CASE("auroc: single-class sets are rejected") {
    const auto preds = testutil::make_preds({0.2, 0.9}, {1, 1});
    CHECK_THROWS_AS(auroc(preds), ConfigError);
}

TEST_CASE("log_loss: clamp bounds and maximum-entropy value") {
    const auto perfect = testutil::make_preds({1.0, 0.0}, {1, 0});
    CHECK(log_loss(perfect) == doctest::Approx(-std::log1p(-1e-15)).epsilon(1e-6));

    const auto half = testutil::make_preds({0.5, 0.5, 0.5}, {1, 0, 1});
    CHECK(log_loss(half) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(log_loss(perfect, 0.7), ConfigError);
}

TEST_CASE("log_loss: hard-classifier identity reproduces the published row") {
    // A hard 0/1 classifier with error rate r has
    //   log_loss = r * (-ln eps) + (1 - r) * (-ln(1 - eps)).
    const auto preds = homewin_set_with_base_rate(10000, 5315);
    const double r = 1.0 - 0.5315;
    const double expected = r * (-std::log(1e-15)) + 0.5315 * (-std::log1p(-1e-15));
    CHECK(log_loss(preds) == doctest::Approx(expected).epsilon(1e-12));
    // Published value for the always-home model on a 53.15% base rate.
    CHECK(log_loss(preds) == doctest::Approx(16.182).epsilon(0.01 / 16.182));
}

TEST_CASE("brier: constant half, hard identity, 9-game hand set") {
    const auto half = testutil::make_preds({0.5, 0.5}, {1, 0});
    CHECK(brier(half) == doctest::Approx(0.25).epsilon(1e-15));

    const auto hard = homewin_set_with_base_rate(10000, 5315);
    CHECK(brier(hard) == doctest::Approx(1.0 - 0.5315).epsilon(1e-12));

    const auto hand = testutil::make_preds(
        {0.7, 0.3, 0.9, 0.2, 0.5, 0.6, 0.8, 0.1, 0.4},
        {1, 0, 1, 0, 1, 0, 1, 0, 1});
    // By hand: squared errors .09 .09 .01 .04 .25 .36 .04 .01 .36, mean = 1.25/9.
    CHECK(brier(hand) == doctest::Approx(1.25 / 9.0).epsilon(1e-12));
}

TEST_CASE("report: the always-home row follows analytically from its base rate") {
    const auto preds = homewin_set_with_base_rate(10000, 5315);
    const auto r = report(preds);
    CHECK(r.accuracy == doctest::Approx(0.5315).epsilon(1e-12));
    CHECK(r.auroc == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.brier == doctest::Approx(0.4685).epsilon(1e-12));
    CHECK(r.log_loss == doctest::Approx(16.182).epsilon(0.001));
    CHECK(r.n_games == 10000);
}

TEST_CASE("report: perfect predictor") {
    const auto preds = testutil::make_preds({1.0, 1.0, 0.0}, {1, 1, 0});
    const auto r = report(preds);
    CHECK(r.accuracy == 1.0);
    CHECK(r.auroc == 1.0);
    CHECK(r.log_loss < 1e-10);
    CHECK(r.brier < 1e-10);
}

TEST_CASE("complement symmetry: flip labels and probabilities") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        auto preds = testutil::random_preds(rng, 40);
        // ensure both classes
        preds.labels[0] = 1;
        preds.labels[1] = 0;
        PredictionSet flipped = preds;
        for (auto& p : flipped.p_home) p = 1.0 - p;
        for (auto& y : flipped.labels) y = y ? 0 : 1;
        CHECK(log_loss(flipped) == doctest::Approx(log_loss(preds)).epsilon(1e-10));
        CHECK(brier(flipped) == doctest::Approx(brier(preds)).epsilon(1e-12));
        CHECK(auroc(flipped) == doctest::Approx(1.0 - auroc(preds)).epsilon(1e-12));
    }
}

TEST_CASE("auroc is invariant under strictly monotone transforms") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        auto preds = testutil::random_preds(rng, 30);
        preds.labels[0] = 1;
        preds.labels[1] = 0;
        PredictionSet squashed = preds;
        for (auto& p : squashed.p_home) p = 0.25 + p / 2.0;  // strictly increasing
        CHECK(auroc(squashed) == doctest::Approx(auroc(preds)).epsilon(1e-12));
    }
}

TEST_CASE("random sets match the brute-force oracles") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 49;
        auto preds = testutil::random_preds(rng, n);
        preds.labels[0] = 1;
        if (n > 1) preds.labels[1] = 0;
        CHECK(accuracy(preds) == doctest::Approx(oracles::accuracy(preds)).epsilon(1e-12));
        CHECK(log_loss(preds) == doctest::Approx(oracles::log_loss(preds)).epsilon(1e-12));
        CHECK(brier(preds) == doctest::Approx(oracles::brier(preds)).epsilon(1e-12));
        if (n >= 2) {
            CHECK(auroc(preds) ==
                  doctest::Approx(oracles::auroc_pairs(preds)).epsilon(1e-12));
        }
    }
}

TEST_CASE("empty sets are rejected") {
    PredictionSet empty;
    empty.model_name = "none";
    CHECK_THROWS_AS(accuracy(empty), ConfigError);
    CHECK_THROWS_AS(log_loss(empty), ConfigError);
    CHECK_THROWS_AS(brier(empty), ConfigError);
}

TEST_CASE("metrics CSV/JSON writers emit one row per model") {
    testutil::TempDir tmp("metrics");
    const auto preds = homewin_set_with_base_rate(200, 106);
    const auto r = report(preds);
    write_metrics_csv({r}, tmp.file("m.csv"));
    write_metrics_json({r}, tmp.file("m.json"));
    CHECK(std::filesystem::file_size(tmp.file("m.csv")) > 0);
    CHECK(std::filesystem::file_size(tmp.file("m.json")) > 0);
}

TEST_SUITE_END();
