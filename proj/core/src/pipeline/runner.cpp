#include "runline/pipeline/runner.hpp"

#include <filesystem>
#include <fstream>
#include <functional>

#include <nlohmann/json.hpp>

#include "runline/betting/betting.hpp"
#include "runline/csv.hpp"
#include "runline/data/ingest.hpp"
#include "runline/data/synthetic.hpp"
#include "runline/ensemble/ensemble.hpp"
#include "runline/error.hpp"
#include "runline/features/feature_matrix.hpp"
#include "runline/metrics/metrics.hpp"
#include "runline/models/elo_model.hpp"
#include "runline/models/factory.hpp"
#include "runline/strength/strength.hpp"
#include "runline/version.hpp"

namespace fs = std::filesystem;

namespace runline::pipeline {

namespace {

const char* kDemoSpec[] = {
    "WPpctDiff", "OPSDiff", "ERApctDiff", "WHIPpctDiff", "RDpctDiff",
    "Pythag",    "Log5",    "ELO",        "Bayes",       "FP-1",
};

// The published 53-column list (Table-2 abbreviations).
const char* kPaperSpec[] = {
    "OPSpctDiff",    "SLGpctDiff",    "OBPpctDiff",     "AVGpctDiff",
    "RpctDiff",      "FPpctDiff",     "OPSDiff",        "SLGDiff",
    "OBPDiff",       "AVGDiff",       "OPS",            "SLG",
    "OBP",           "AVG",           "R",              "RD",
    "ISO",           "FP-1",          "R-1",            "ERApctDiff",
    "WHIPpctDiff",   "RApctDiff",     "SP-IPpctDiff",   "SP-WPApctDiff",
    "SP-ERApctDiff", "SP-WHIPpctDiff","WHIP-1",         "ERA-1",
    "RA-1",          "RA",            "SP-ERA",         "SP-WHIP",
    "SP-WPA",        "SP-IP",         "SP-NumG",        "BayespctDiff",
    "W-LpctDiff",    "RankpctDiff",   "PythagpctDiff",  "RDpctDiff",
    "Rank-1",        "W-L-1",         "Attend-1",       "Bayes",
    "WD",            "Pythag",        "WP",             "ELO",
    "Rest",          "PrevWL",        "Log5",           "Y",
    "M",
};

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    for (char c : csv) {
        if (c == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else if (c != ' ' && c != '\t') {
            item.push_back(c);
        }
    }
    if (!item.empty()) out.push_back(item);
    return out;
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw Error("stage " + name + ": " + e.what());
    }
}

models::HyperParams params_from_config(const ConfigFile& config,
                                       const std::string& family) {
    models::HyperParams params;
    for (const auto& [key, value] : config.with_prefix("models", family + ".")) {
        params[key] = std::stod(value);
    }
    return params;
}

}  // namespace

std::vector<std::string> builtin_feature_spec(const std::string& name) {
    std::vector<std::string> out;
    if (name == "demo") {
        out.assign(std::begin(kDemoSpec), std::end(kDemoSpec));
    } else if (name == "paper") {
        out.assign(std::begin(kPaperSpec), std::end(kPaperSpec));
    } else {
        throw ConfigError("unknown builtin feature spec '" + name +
                          "' (builtins: demo, paper)");
    }
    return out;
}

RunManifest run_pipeline(const ConfigFile& config, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const auto out_path = [&](const std::string& name) {
        return (fs::path(out_dir) / name).string();
    };

    RunManifest manifest;
    manifest.tool = kToolName;
    manifest.version = kVersion;
    manifest.config = config.sections();
    std::vector<std::string> outputs;
    auto record = [&](const std::string& name) { outputs.push_back(name); };

    // ---- data -------------------------------------------------------------
    const std::string source = config.get_or("data", "source", "synth");
    const bool synthetic = source == "synth";
    SyntheticConfig synth_config;
    Dataset games = stage("data", [&] {
        if (synthetic) {
            synth_config.n_teams = static_cast<int>(config.get_int("synth", "teams", 12));
            synth_config.n_seasons =
                static_cast<int>(config.get_int("synth", "seasons", 8));
            synth_config.games_per_team =
                static_cast<int>(config.get_int("synth", "games_per_team", 60));
            synth_config.first_season =
                static_cast<int>(config.get_int("synth", "first_season", 2001));
            synth_config.home_advantage =
                config.get_double("synth", "home_advantage", 0.124);
            synth_config.strength_spread =
                config.get_double("synth", "strength_spread", 0.45);
            synth_config.run_scale = config.get_double("synth", "run_scale", 0.7);
            synth_config.seed =
                static_cast<std::uint64_t>(config.get_int("synth", "seed", 1));
            manifest.seeds["synth"] = synth_config.seed;
            return generate_synthetic(synth_config).games;
        }
        if (source != "csv") {
            throw ConfigError("data.source must be synth or csv, got '" + source + "'");
        }
        const std::string games_path = config.get("data", "games");
        manifest.input_digests[games_path] = hash_file(games_path);
        return ingest_games(games_path,
                            config.get_bool("data", "exclude_playoffs", true));
    });
    std::map<std::string, double> latent;
    if (synthetic) {
        // Re-generate to recover the latent strengths alongside the games.
        latent = generate_synthetic(synth_config).latent;
        write_latent_csv(latent, out_path("latent.csv"));
        record("latent.csv");
    }
    write_games_csv(games, out_path("games.csv"));
    record("games.csv");

    // ---- features ----------------------------------------------------------
    const int last_train_season =
        static_cast<int>(config.get_int("split", "last_train_season", 0));
    features::StatsStore stats = stage("features", [&] {
        const std::string stats_source = config.get_or("features", "stats", "synth");
        if (stats_source == "synth") {
            if (!synthetic) {
                throw ConfigError(
                    "features.stats = synth requires data.source = synth "
                    "(no latent strengths for ingested games)");
            }
            const auto stats_seed =
                static_cast<std::uint64_t>(config.get_int("features", "stats_seed", 11));
            manifest.seeds["stats"] = stats_seed;
            return features::synthesize_team_stats(latent, synth_config.first_season,
                                                   synth_config.n_seasons, stats_seed);
        }
        manifest.input_digests[stats_source] = hash_file(stats_source);
        return features::StatsStore::load_csv(stats_source);
    });
    stats.save_csv(out_path("team_stats.csv"));
    record("team_stats.csv");

    features::FeatureMatrix matrix = stage("features", [&] {
        const std::string spec_name = config.get_or("features", "spec", "demo");
        std::vector<features::ColumnSpec> spec;
        if (spec_name == "demo" || spec_name == "paper") {
            for (const auto& token : builtin_feature_spec(spec_name)) {
                spec.push_back(features::parse_column_spec(token));
            }
        } else {
            manifest.input_digests[spec_name] = hash_file(spec_name);
            spec = features::load_feature_spec(spec_name);
        }
        std::ofstream spec_out(out_path("feature_spec.txt"));
        for (const auto& col : spec) spec_out << col.name << '\n';
        record("feature_spec.txt");
        return features::build_feature_matrix(games, stats, spec);
    });
    write_feature_csv(matrix, out_path("features.csv"));
    record("features.csv");

    // ---- split + train ------------------------------------------------------
    auto [train_matrix, test_matrix] = stage("split", [&] {
        return features::split_matrix_by_season(matrix, last_train_season);
    });

    const auto model_seed =
        static_cast<std::uint64_t>(config.get_int("models", "seed", 7));
    manifest.seeds["models"] = model_seed;
    const double threshold = config.get_double("models", "threshold", 0.5);

    std::vector<PredictionSet> predictions;
    stage("train", [&] {
        const auto families =
            split_list(config.get_or("models", "train", "homewin,logr,elo"));
        if (families.empty()) throw ConfigError("models.train lists no model families");
        for (const auto& family : families) {
            PredictionSet preds;
            if (family == "elo") {
                models::EloModelConfig elo_config;
                elo_config.k_factor = config.get_double("models", "elo.k_factor", 4.0);
                elo_config.home_advantage_points =
                    config.get_double("models", "elo.home_advantage_points", 24.0);
                preds = models::elo_model_predict(games, last_train_season, elo_config);
            } else {
                auto model = models::make_classifier(
                    family, params_from_config(config, family), model_seed);
                model->fit(train_matrix);
                preds = model->predict_set(test_matrix);
            }
            write_predictions_csv(preds, out_path("predictions_" + family + ".csv"));
            record("predictions_" + family + ".csv");
            predictions.push_back(std::move(preds));
        }
        return 0;
    });

    // ---- evaluate ------------------------------------------------------------
    stage("evaluate", [&] {
        std::vector<metrics::MetricsReport> reports;
        reports.reserve(predictions.size());
        for (const auto& preds : predictions) {
            reports.push_back(metrics::report(preds, threshold));
        }
        metrics::write_metrics_csv(reports, out_path("metrics.csv"));
        metrics::write_metrics_json(reports, out_path("metrics.json"));
        record("metrics.csv");
        record("metrics.json");
        return 0;
    });

    // ---- strength -------------------------------------------------------------
    stage("strength", [&] {
        std::vector<std::vector<std::string>> fit_rows;
        for (const auto& preds : predictions) {
            const auto bins = strength::bin_by_probability(preds);
            const auto ranges = strength::standard_report_suite(preds);
            strength::write_bins_csv(bins, out_path("strength_bins_" +
                                                    preds.model_name + ".csv"));
            record("strength_bins_" + preds.model_name + ".csv");
            strength::write_ranges_csv(ranges, out_path("strength_ranges_" +
                                                        preds.model_name + ".csv"));
            record("strength_ranges_" + preds.model_name + ".csv");
            strength::FitSummary fit;
            bool have_fit = true;
            try {
                fit = strength::prob_diff_regression(preds);
            } catch (const ConfigError&) {
                have_fit = false;  // constant predictor (homewin)
            }
            if (have_fit) {
                fit_rows.push_back({preds.model_name, format_double(fit.slope, 6),
                                    format_double(fit.intercept, 6),
                                    format_double(fit.r_squared, 6)});
            } else {
                fit_rows.push_back({preds.model_name, "-", "-", "-"});
            }
            strength::write_strength_json(
                bins, ranges, have_fit ? fit : strength::FitSummary{},
                out_path("strength_" + preds.model_name + ".json"));
            record("strength_" + preds.model_name + ".json");
        }
        write_csv(out_path("strength_fits.csv"),
                  {"model", "slope", "intercept", "r_squared"}, fit_rows);
        record("strength_fits.csv");
        return 0;
    });

    // ---- ensemble --------------------------------------------------------------
    stage("ensemble", [&] {
        if (predictions.size() >= 2) {
            const auto agreement = ensemble::agreement_matrix(predictions, threshold);
            ensemble::write_agreement_csv(agreement, out_path("agreement.csv"));
            record("agreement.csv");
        }
        if (predictions.size() >= 3) {
            const auto triplets = ensemble::triplet_table(predictions, threshold);
            ensemble::write_triplets_csv(triplets, out_path("triplets.csv"));
            record("triplets.csv");
        }
        return 0;
    });

    // ---- betting ----------------------------------------------------------------
    if (config.get_bool("betting", "enabled", true)) {
        stage("betting", [&] {
            const std::string odds_source = config.get_or("betting", "odds", "synth");
            betting::QuoteStore quotes;
            if (odds_source == "synth") {
                if (!synthetic) {
                    throw ConfigError(
                        "betting.odds = synth requires data.source = synth; supply "
                        "betting.odds = <odds CSV> for ingested games");
                }
                quotes = betting::synth_quotes(
                    games, latent, synth_config.home_advantage, synth_config.run_scale,
                    config.get_double("betting", "vig", 0.045));
            } else {
                manifest.input_digests[odds_source] = hash_file(odds_source);
                quotes = betting::QuoteStore::load_csv(odds_source);
            }
            quotes.save_csv(out_path("odds.csv"));
            record("odds.csv");

            const std::string bet_model = config.get_or("betting", "model", "logr");
            const PredictionSet* preds = nullptr;
            for (const auto& p : predictions) {
                if (p.model_name == bet_model) preds = &p;
            }
            if (preds == nullptr) {
                throw ConfigError("betting.model = " + bet_model +
                                  " is not among the trained models");
            }
            const double stake = config.get_double("betting", "stake", 1.0);
            const auto naive = betting::naive_backtest(*preds, quotes, stake);
            const auto grid = betting::grid_search_cutoffs(
                *preds, quotes,
                static_cast<int>(config.get_int("betting", "grid_low", 20)),
                static_cast<int>(config.get_int("betting", "grid_high", 20)), stake,
                static_cast<int>(config.get_int("betting", "jobs", 1)));
            betting::write_grid_csv(grid, out_path("betting_returns.csv"),
                                    out_path("betting_wager_fraction.csv"));
            record("betting_returns.csv");
            record("betting_wager_fraction.csv");

            nlohmann::ordered_json doc;
            doc["model"] = bet_model;
            doc["stake"] = stake;
            doc["naive"] = {{"return_pct", naive.return_pct},
                            {"n_wagered", naive.n_wagered},
                            {"total_staked", naive.total_staked},
                            {"total_profit", naive.total_profit}};
            doc["grid"] = {{"n_low", grid.low_cutoffs.size()},
                           {"n_high", grid.high_cutoffs.size()},
                           {"low_cutoffs", grid.low_cutoffs},
                           {"high_cutoffs", grid.high_cutoffs},
                           {"returns_pct", grid.returns_pct},
                           {"wager_fraction", grid.wager_fraction}};
            std::ofstream out(out_path("betting.json"));
            if (!out) throw Error("cannot write betting.json");
            out << doc.dump(2) << '\n';
            record("betting.json");
            return 0;
        });
    }

    // ---- manifest ------------------------------------------------------------
    for (const auto& name : outputs) {
        manifest.output_digests[name] = hash_file(out_path(name));
    }
    manifest.save(out_path("manifest.json"));
    return manifest;
}

}  // namespace runline::pipeline
