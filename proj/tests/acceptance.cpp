// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "runline/betting/betting.hpp"
#include "runline/data/synthetic.hpp"
#include "runline/ensemble/ensemble.hpp"
#include "runline/features/elo.hpp"
#include "runline/features/feature_matrix.hpp"
#include "runline/features/stats_store.hpp"
#include "runline/math.hpp"
#include "runline/metrics/metrics.hpp"
#include "runline/models/elo_model.hpp"
#include "runline/models/factory.hpp"
#include "runline/models/gbdt.hpp"
#include "runline/models/homewin.hpp"
#include "runline/models/knn.hpp"
#include "runline/models/logistic_regression.hpp"
#include "runline/models/neural_net.hpp"
#include "runline/models/svm.hpp"
#include "runline/pipeline/config.hpp"
#include "runline/pipeline/diff.hpp"
#include "runline/pipeline/runner.hpp"
#include "runline/strength/strength.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace runline;

namespace {

struct Checker {
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void within(double value, double target, double tol, const std::string& what) {
        if (!(std::abs(value - target) <= tol)) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s: got %.6f, want %.6f +/- %.6g",
                          what.c_str(), value, target, tol);
            failures.push_back(buf);
        }
    }
};

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<void(Checker&)> body;
};

// ---------------------------------------------------------------------------
// 1. Published always-home row reproduced analytically from a 53.15% base rate.
void criterion_homewin_row(Checker& check) {
    const std::size_t n = 10000, wins = 5315;
    std::vector<double> p(n, 1.0);
    std::vector<std::uint8_t> y(n, 0);
    for (std::size_t i = 0; i < wins; ++i) y[i] = 1;
    const auto preds = testutil::make_preds(p, y, {}, "homewin");

    check.within(metrics::accuracy(preds), 0.5315, 1e-12, "accuracy");
    check.require(metrics::auroc(preds) == 0.5, "auroc exactly 0.5");
    check.within(metrics::brier(preds), 0.4685, 1e-4, "brier");
    check.within(metrics::log_loss(preds, 1e-15), 16.182, 0.01, "log_loss");
}

// ---------------------------------------------------------------------------
// 2. Metrics match enumeration / all-pairs oracles on 200 random sets.
void criterion_metric_oracles(Checker& check) {
    std::mt19937_64 rng(20240501);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 49;
        auto preds = testutil::random_preds(rng, n);
        preds.labels[0] = 1;
        preds.labels[1] = 0;
        const std::string tag = " (trial " + std::to_string(trial) + ")";
        check.within(metrics::accuracy(preds), oracles::accuracy(preds), 1e-12,
                     "accuracy vs oracle" + tag);
        check.within(metrics::auroc(preds), oracles::auroc_pairs(preds), 1e-12,
                     "auroc vs oracle" + tag);
        check.within(metrics::log_loss(preds), oracles::log_loss(preds), 1e-12,
                     "log_loss vs oracle" + tag);
        check.within(metrics::brier(preds), oracles::brier(preds), 1e-12,
                     "brier vs oracle" + tag);
        if (!check.failures.empty()) return;
    }
}

// ---------------------------------------------------------------------------
// 3. Model sanity: separability, oracles, gradient checks, kernel test, Elo.
void criterion_model_sanity(Checker& check) {
    // LogR on separable data.
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> mag(0.1, 2.0);
        std::vector<std::vector<double>> rows;
        std::vector<std::uint8_t> labels;
        for (int i = 0; i < 400; ++i) {
            const bool home = (i % 2) == 0;
            rows.push_back({home ? mag(rng) : -mag(rng)});
            labels.push_back(home ? 1 : 0);
        }
        const auto train = testutil::make_matrix(rows, labels);
        models::LogisticRegression model;
        model.fit(train);
        const auto probs = model.predict(train);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if ((probs[i] >= 0.5) == (labels[i] != 0)) ++hits;
        }
        check.require(static_cast<double>(hits) / 400.0 >= 0.99,
                      "logr accuracy >= 0.99 on separable data");
    }
    // KNN vs the exhaustive oracle on 20-point sets.
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        std::vector<std::vector<double>> rows;
        std::vector<std::uint8_t> labels;
        for (int i = 0; i < 20; ++i) {
            rows.push_back({u(rng), u(rng)});
            labels.push_back(static_cast<std::uint8_t>(rng() % 2));
        }
        labels[0] = 1;
        labels[1] = 0;
        const auto train = testutil::make_matrix(rows, labels);
        std::vector<std::vector<double>> qrows;
        for (int i = 0; i < 10; ++i) qrows.push_back({u(rng), u(rng)});
        const auto queries =
            testutil::make_matrix(qrows, std::vector<std::uint8_t>(10, 1));
        for (int k : {1, 5, 20}) {
            const auto expected = oracles::knn_probs(train, queries, k, 2.0);
            const auto got = models::knn_fit_predict(train, queries, k, 2.0);
            for (std::size_t i = 0; i < expected.size(); ++i) {
                check.within(got.p_home[i], expected[i], 1e-12,
                             "knn vs oracle (k=" + std::to_string(k) + ")");
            }
        }
    }
    // GBDT first split vs brute force.
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<std::vector<double>> rows;
        std::vector<std::uint8_t> labels;
        for (int i = 0; i < 300; ++i) {
            const double x = u(rng), z = u(rng);
            rows.push_back({x, z});
            labels.push_back(x > 0.6 ? 1 : 0);
        }
        const auto train = testutil::make_matrix(rows, labels);
        models::GbdtConfig config;
        config.rounds = 1;
        config.depth = 1;
        models::GbdtClassifier model(config);
        model.fit(train);
        const auto [feature, threshold] = model.first_split();
        const auto [oracle_feature, oracle_threshold] =
            oracles::gbdt_first_split(train, config.l2_leaf);
        check.require(feature == oracle_feature, "gbdt split feature matches oracle");
        check.within(threshold, oracle_threshold, 1e-12, "gbdt split threshold");
    }
    // ANN finite-difference gradient check.
    {
        const auto batch = testutil::xor_clusters(10, 11);
        models::AnnConfig config;
        config.hidden_sizes = {6};
        config.seed = 0;
        models::NeuralNetClassifier model(config);
        model.initialize(batch.cols());
        const auto analytic = model.batch_gradient(batch);
        auto params = model.parameters();
        const double step = 1e-5;
        double norm_diff = 0.0, norm_sum = 0.0;
        for (std::size_t i = 0; i < params.size(); ++i) {
            const double saved = params[i];
            params[i] = saved + step;
            model.set_parameters(params);
            const double up = model.batch_loss(batch);
            params[i] = saved - step;
            model.set_parameters(params);
            const double down = model.batch_loss(batch);
            params[i] = saved;
            const double numeric = (up - down) / (2.0 * step);
            norm_diff += (analytic[i] - numeric) * (analytic[i] - numeric);
            norm_sum += analytic[i] * analytic[i] + numeric * numeric;
        }
        const double rel =
            std::sqrt(norm_diff) / std::max(std::sqrt(norm_sum), 1e-12);
        check.require(rel < 1e-4, "ann finite-difference gradient check (rel err " +
                                      std::to_string(rel) + ")");
    }
    // SVM on XOR clusters.
    {
        const auto train = testutil::xor_clusters(400, 13);
        const auto test = testutil::xor_clusters(200, 14);
        models::SvmClassifier model;
        model.fit(train);
        const auto probs = model.predict(test);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if ((probs[i] >= 0.5) == (test.labels[i] != 0)) ++hits;
        }
        check.require(static_cast<double>(hits) / 200.0 >= 0.95,
                      "svm accuracy >= 0.95 on XOR clusters");
    }
    // Elo expectation with the 24-point home advantage.
    {
        features::EloState state;
        state.ratings = {{"H", 1500.0}, {"A", 1500.0}};
        check.within(features::elo_expected_home(state, "H", "A"), 0.5345, 1e-4,
                     "elo expectation at 24 points");
    }
}

// ---------------------------------------------------------------------------
// 4. Strength-link recovery on a >= 50k-game corpus.
void criterion_strength_link(Checker& check) {
    SyntheticConfig config;
    config.n_teams = 30;
    config.n_seasons = 21;
    config.games_per_team = 162;
    config.first_season = 2001;
    config.strength_spread = 0.45;
    config.run_scale = 0.7;
    config.seed = 424242;
    const auto synth = generate_synthetic(config);
    check.require(synth.games.size() >= 50000, "corpus holds at least 50k games");

    const auto stats = features::synthesize_team_stats(
        synth.latent, config.first_season, config.n_seasons, 99);
    std::vector<features::ColumnSpec> spec;
    for (const auto& token : pipeline::builtin_feature_spec("demo")) {
        spec.push_back(features::parse_column_spec(token));
    }
    const auto matrix = features::build_feature_matrix(synth.games, stats, spec);
    auto [train, test] = features::split_matrix_by_season(matrix, 2016);

    models::LogrConfig logr;
    logr.epochs = 300;
    models::LogisticRegression model(logr);
    model.fit(train);
    const auto preds = model.predict_set(test);

    const auto fit = strength::prob_diff_regression(preds);
    check.require(fit.slope > 0.0, "probability/score-differential slope positive");
    check.require(fit.r_squared > 0.05,
                  "R^2 " + std::to_string(fit.r_squared) + " > 0.05");

    const auto bins = strength::bin_by_probability(preds, 0.1);
    double previous = -1e9;
    for (const auto& bin : bins) {
        if (bin.n_games == 0) continue;
        check.require(*bin.mean_diff >= previous,
                      "bin means monotone non-decreasing (center " +
                          std::to_string(bin.bin_center) + ")");
        previous = *bin.mean_diff;
    }
}

// ---------------------------------------------------------------------------
// 5. Ensemble invariants over five trained models.
void criterion_ensemble(Checker& check) {
    SyntheticConfig config;
    config.n_teams = 12;
    config.n_seasons = 6;
    config.games_per_team = 40;
    config.strength_spread = 0.5;
    config.seed = 515151;
    const auto corpus = testutil::gap_corpus(config);
    auto [train, test] = features::split_matrix_by_season(corpus.matrix, 2004);

    std::vector<PredictionSet> preds;
    for (const auto* family : {"homewin", "logr", "knn", "gbdt", "ann"}) {
        models::HyperParams params;
        if (std::string(family) == "gbdt") params["rounds"] = 40;
        if (std::string(family) == "ann") params["epochs"] = 15;
        auto model = models::make_classifier(family, params, 11);
        model->fit(train);
        preds.push_back(model->predict_set(test));
    }

    std::map<std::string, double> individual;
    for (const auto& p : preds) individual[p.model_name] = metrics::accuracy(p);

    const auto table = ensemble::triplet_table(preds);
    check.require(table.size() == 10, "C(5,3) = 10 triplets");
    for (const auto& t : table) {
        double max_ind = 0.0;
        for (const auto& name : t.models) {
            max_ind = std::max(max_ind, individual.at(name));
        }
        check.require(t.oracle_accuracy >= max_ind - 1e-12,
                      "oracle >= max individual");
        check.require(t.oracle_accuracy <= 1.0, "oracle <= 1");
        check.require(t.majority_accuracy <= t.oracle_accuracy + 1e-12,
                      "majority <= oracle");
    }
    // Identical models: oracle equals the individual accuracy.
    const double same = ensemble::oracle_accuracy({preds[1], preds[1], preds[1]});
    check.within(same, individual.at(preds[1].model_name), 1e-12,
                 "oracle of identical models");

    const auto agreement = ensemble::agreement_matrix(preds);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        check.require(agreement.at(i, i) == 1.0, "agreement diagonal is 1");
        for (std::size_t j = 0; j < preds.size(); ++j) {
            check.require(agreement.at(i, j) == agreement.at(j, i),
                          "agreement symmetric");
        }
    }
}

// ---------------------------------------------------------------------------
// 6. Betting engine identities.
void criterion_betting(Checker& check) {
    // (a) + (b): naive cell embedded in a full default grid.
    {
        SyntheticConfig config;
        config.n_teams = 10;
        config.n_seasons = 2;
        config.games_per_team = 100;
        config.strength_spread = 0.5;
        config.seed = 616161;
        const auto corpus = testutil::gap_corpus(config);
        auto [train, test] = features::split_matrix_by_season(corpus.matrix, 2001);
        models::LogisticRegression model;
        model.fit(train);
        const auto preds = model.predict_set(test);
        const auto quotes = betting::synth_quotes(
            corpus.synth.games, corpus.synth.latent, config.home_advantage,
            config.run_scale, 0.045);

        const auto naive = betting::naive_backtest(preds, quotes);
        const auto grid = betting::grid_search_cutoffs(preds, quotes, 20, 20);
        check.require(grid.returns_pct.size() == 400, "grid has 400 cells");
        check.require(grid.ret(19, 0) == naive.return_pct,
                      "grid cell (0.5, 0.5) reproduces naive bit-exactly");
        check.require(grid.frac(19, 0) == naive.wager_fraction,
                      "grid cell (0.5, 0.5) wager fraction matches naive");
        bool monotone = true;
        for (std::size_t j = 0; j < 20 && monotone; ++j) {
            for (std::size_t i = 1; i < 20 && monotone; ++i) {
                monotone = grid.frac(i, j) >= grid.frac(i - 1, j) - 1e-12;
            }
        }
        for (std::size_t i = 0; i < 20 && monotone; ++i) {
            for (std::size_t j = 1; j < 20 && monotone; ++j) {
                monotone = grid.frac(i, j) <= grid.frac(i, j - 1) + 1e-12;
            }
        }
        check.require(monotone, "wager fraction monotone along both axes");
    }
    // (c) Fair zero-vig market: mean return within 3 SE of zero over 20 seeds.
    {
        std::vector<double> returns;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            SyntheticConfig config;
            config.n_teams = 10;
            config.n_seasons = 2;
            config.games_per_team = 100;
            config.strength_spread = 0.4;
            config.seed = 700 + seed;
            const auto synth = generate_synthetic(config);
            const auto quotes = betting::synth_quotes(
                synth.games, synth.latent, config.home_advantage, config.run_scale,
                0.0);
            // The bettor knows the true win probabilities; fair prices still
            // leave no edge.
            PredictionSet preds;
            preds.model_name = "truth";
            for (const auto& g : synth.games.games()) {
                preds.game_ids.push_back(g.game_id);
                preds.p_home.push_back(
                    sigmoid(synth.latent.at(g.home_team) -
                            synth.latent.at(g.away_team) + config.home_advantage));
                preds.labels.push_back(g.home_win() ? 1 : 0);
                preds.score_diffs.push_back(g.score_diff());
            }
            returns.push_back(betting::naive_backtest(preds, quotes).return_pct);
        }
        const double mean_return = mean(returns);
        const double se =
            sample_sd(returns) / std::sqrt(static_cast<double>(returns.size()));
        check.require(std::abs(mean_return) <= 3.0 * se,
                      "fair-market mean return " + std::to_string(mean_return) +
                          " within 3 SE (" + std::to_string(se) + ") of 0");
    }
    // (d) Vig market, no-skill predictor: return ~ -v/(1+v).
    {
        const double vig = 0.045;
        SyntheticConfig config;
        config.n_teams = 30;
        config.n_seasons = 40;
        config.games_per_team = 162;
        config.strength_spread = 0.4;
        config.seed = 818181;
        const auto synth = generate_synthetic(config);
        const auto quotes = betting::synth_quotes(
            synth.games, synth.latent, config.home_advantage, config.run_scale, vig);
        const auto preds = models::homewin_predict(synth.games);  // always home
        const auto result = betting::naive_backtest(preds, quotes);
        const double expected = -100.0 * vig / (1.0 + vig);
        check.within(result.return_pct, expected, 1.0,
                     "house edge on a no-skill predictor (pp)");
    }
}

// ---------------------------------------------------------------------------
// 7. Reproducibility: the bundled demo config runs byte-identically twice.
void criterion_reproducibility(Checker& check) {
    const auto config = pipeline::ConfigFile::parse_string(
        pipeline::reference_config_text(), "reference");
    testutil::TempDir a("acc_run_a"), b("acc_run_b");
    const auto ma = pipeline::run_pipeline(config, a.dir());
    const auto mb = pipeline::run_pipeline(config, b.dir());
    check.require(ma.output_digests == mb.output_digests,
                  "output digests identical across runs");
    check.require(pipeline::hash_file(a.dir() + "/manifest.json") ==
                      pipeline::hash_file(b.dir() + "/manifest.json"),
                  "manifests byte-identical");
    for (const auto& [name, digest] : ma.output_digests) {
        check.require(pipeline::hash_file(a.dir() + "/" + name) ==
                          pipeline::hash_file(b.dir() + "/" + name),
                      name + " byte-identical");
    }
    const auto report = pipeline::diff_reports(a.dir(), b.dir(), 0.0);
    check.require(report.within_tolerance, "diff reports no differences");
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"1. always-home metrics row reproduced analytically", 1.0,
         criterion_homewin_row},
        {"2. metrics match brute-force oracles on 200 random sets", 10.0,
         criterion_metric_oracles},
        {"3. model sanity suite (logr/knn/gbdt/ann/svm/elo)", 120.0,
         criterion_model_sanity},
        {"4. strength link recovered on a 50k-game corpus", 120.0,
         criterion_strength_link},
        {"5. ensemble invariants over five trained models", 30.0,
         criterion_ensemble},
        {"6. betting engine identities and market checks", 60.0, criterion_betting},
        {"7. demo pipeline reproducibility (byte-identical trees)", 300.0,
         criterion_reproducibility},
    };

    int failed = 0;
    for (auto& criterion : criteria) {
        Checker check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.body(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (elapsed > criterion.budget_seconds) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "over budget: %.1fs > %.0fs", elapsed,
                          criterion.budget_seconds);
            check.failures.push_back(buf);
        }
        if (check.failures.empty()) {
            std::printf("PASS  %s (%.2fs)\n", criterion.name.c_str(), elapsed);
        } else {
            ++failed;
            std::printf("FAIL  %s (%.2fs)\n", criterion.name.c_str(), elapsed);
            for (const auto& f : check.failures) {
                std::printf("      - %s\n", f.c_str());
            }
        }
    }
    std::printf(
        "SKIP  8. real-data accuracy band (optional; requires a user-supplied "
        "games/stats extract, see README)\n");
    if (failed > 0) {
        std::printf("%d criterion(s) failed\n", failed);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
