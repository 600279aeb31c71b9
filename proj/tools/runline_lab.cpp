// runline-lab: train win-prediction models, relate win probability to score
// differential, analyze ensembles, and backtest run-line betting strategies.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
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
#include "runline/models/grid_search.hpp"
#include "runline/pipeline/config.hpp"
#include "runline/pipeline/diff.hpp"
#include "runline/pipeline/runner.hpp"
#include "runline/strength/strength.hpp"
#include "runline/version.hpp"

namespace fs = std::filesystem;
using namespace runline;

namespace {

models::HyperParams parse_params(const std::vector<std::string>& pairs) {
    models::HyperParams params;
    for (const auto& pair : pairs) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--param expects key=value, got '" + pair + "'");
        }
        params[pair.substr(0, eq)] =
            parse_double(pair.substr(eq + 1), "--param " + pair);
    }
    return params;
}

std::vector<features::ColumnSpec> load_spec_arg(const std::string& spec) {
    if (spec == "demo" || spec == "paper") {
        std::vector<features::ColumnSpec> out;
        for (const auto& token : pipeline::builtin_feature_spec(spec)) {
            out.push_back(features::parse_column_spec(token));
        }
        return out;
    }
    return features::load_feature_spec(spec);
}

void print_metrics(const metrics::MetricsReport& r) {
    std::cout << r.model_name << ": n=" << r.n_games
              << " accuracy=" << format_double(r.accuracy, 4)
              << " auroc=" << format_double(r.auroc, 4)
              << " log_loss=" << format_double(r.log_loss, 4)
              << " brier=" << format_double(r.brier, 4) << "\n";
}

std::string out_file(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MLB win-prediction, win-strength analysis and run-line "
                 "betting backtests"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    // ---- synth -------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Generate a synthetic season corpus");
    SyntheticConfig synth_config;
    std::string synth_out = "games.csv";
    std::string latent_out;
    synth->add_option("--teams", synth_config.n_teams, "Number of teams");
    synth->add_option("--seasons", synth_config.n_seasons, "Number of seasons");
    synth->add_option("--games-per-team", synth_config.games_per_team,
                      "Games per team per season");
    synth->add_option("--first-season", synth_config.first_season, "First season year");
    synth->add_option("--seed", synth_config.seed, "RNG seed");
    synth->add_option("--home-advantage", synth_config.home_advantage,
                      "Home advantage in log-odds");
    synth->add_option("--strength-spread", synth_config.strength_spread,
                      "Latent strength standard deviation");
    synth->add_option("--run-scale", synth_config.run_scale,
                      "Margin growth per unit strength gap");
    synth->add_option("--out", synth_out, "Games CSV to write")->required();
    synth->add_option("--latent-out", latent_out, "Latent strengths CSV to write");
    synth->callback([&] {
        const auto result = generate_synthetic(synth_config);
        write_games_csv(result.games, synth_out);
        if (!latent_out.empty()) write_latent_csv(result.latent, latent_out);
        std::cout << "wrote " << result.games.size() << " games over "
                  << result.games.seasons().size() << " seasons to " << synth_out
                  << "\n";
    });

    // ---- ingest ------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "Validate and normalize a games CSV");
    std::string ingest_games_path;
    std::string ingest_out;
    bool exclude_playoffs = false;
    ingest->add_option("--games", ingest_games_path, "Games CSV")->required();
    ingest->add_flag("--exclude-playoffs", exclude_playoffs, "Drop playoff rows");
    ingest->add_option("--out", ingest_out, "Write the normalized dataset here");
    ingest->callback([&] {
        const Dataset data = ingest_games(ingest_games_path, exclude_playoffs);
        std::cout << "ok: " << data.size() << " games, seasons "
                  << data.min_season() << ".." << data.max_season() << "\n";
        if (!ingest_out.empty()) write_games_csv(data, ingest_out);
    });

    // ---- features ----------------------------------------------------------
    auto* feat = app.add_subcommand("features", "Build a per-game feature matrix");
    std::string feat_games, feat_stats, feat_spec = "demo", feat_out;
    feat->add_option("--games", feat_games, "Games CSV")->required();
    feat->add_option("--stats", feat_stats, "Team-stats CSV")->required();
    feat->add_option("--spec", feat_spec, "Feature spec file, or builtin demo|paper");
    feat->add_option("--out", feat_out, "Feature matrix CSV to write")->required();
    feat->callback([&] {
        const Dataset data = ingest_games(feat_games, true);
        const auto stats = features::StatsStore::load_csv(feat_stats);
        const auto matrix =
            features::build_feature_matrix(data, stats, load_spec_arg(feat_spec));
        write_feature_csv(matrix, feat_out);
        std::cout << "wrote " << matrix.rows() << " x " << matrix.cols()
                  << " feature matrix to " << feat_out << "\n";
    });

    // ---- train ---------------------------------------------------------------
    auto* train = app.add_subcommand("train", "Fit one model and write predictions");
    std::string train_model, train_features, train_games, train_out;
    int last_train_season = 0;
    std::uint64_t train_seed = 7;
    std::vector<std::string> train_params;
    train->add_option("--model", train_model,
                      "homewin|logr|knn|svm|gbdt|ann|elo")->required();
    train->add_option("--features", train_features,
                      "Feature matrix CSV (matrix families)");
    train->add_option("--games", train_games, "Games CSV (elo family)");
    train->add_option("--last-train-season", last_train_season,
                      "Last season used for training")->required();
    train->add_option("--seed", train_seed, "RNG seed for stochastic fits");
    train->add_option("--param", train_params, "Hyperparameter key=value")
        ->take_all();
    train->add_option("--out", train_out, "Predictions CSV to write")->required();
    train->callback([&] {
        PredictionSet preds;
        if (train_model == "elo") {
            if (train_games.empty()) {
                throw ConfigError("train --model elo needs --games (it consumes "
                                  "game records, not a feature matrix)");
            }
            preds = models::elo_model_predict(ingest_games(train_games, true),
                                              last_train_season, {});
        } else {
            if (train_features.empty()) {
                throw ConfigError("train needs --features for model '" + train_model +
                                  "'");
            }
            const auto matrix = features::read_feature_csv(train_features);
            auto [train_part, test_part] =
                features::split_matrix_by_season(matrix, last_train_season);
            auto model = models::make_classifier(train_model,
                                                 parse_params(train_params), train_seed);
            model->fit(train_part);
            preds = model->predict_set(test_part);
        }
        write_predictions_csv(preds, train_out);
        std::cout << "wrote " << preds.size() << " predictions for " << preds.model_name
                  << " to " << train_out << "\n";
    });

    // ---- gridsearch ------------------------------------------------------------
    auto* gridsearch = app.add_subcommand(
        "gridsearch", "Season-respecting hyperparameter search for one family");
    std::string gs_model, gs_grid, gs_features, gs_out;
    int gs_boundary = 0;
    std::uint64_t gs_seed = 7;
    gridsearch->add_option("--model", gs_model, "Model family")->required();
    gridsearch->add_option("--grid", gs_grid,
                           "JSON file: array of {param: value} cells")->required();
    gridsearch->add_option("--features", gs_features, "Feature matrix CSV")->required();
    gridsearch
        ->add_option("--val-boundary", gs_boundary,
                     "Seasons after this validate the earlier fit")
        ->required();
    gridsearch->add_option("--seed", gs_seed, "RNG seed");
    gridsearch->add_option("--out", gs_out, "Results CSV to write");
    gridsearch->callback([&] {
        std::ifstream in(gs_grid);
        if (!in) throw ConfigError("cannot open grid file '" + gs_grid + "'");
        nlohmann::json doc;
        in >> doc;
        const auto& cells = doc.is_array() ? doc : doc.at("grid");
        std::vector<models::HyperParams> grid;
        for (const auto& cell : cells) {
            models::HyperParams params;
            for (const auto& [key, value] : cell.items()) {
                params[key] = value.get<double>();
            }
            grid.push_back(std::move(params));
        }
        const auto matrix = features::read_feature_csv(gs_features);
        const auto result =
            models::grid_search(gs_model, grid, matrix, gs_boundary, gs_seed);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t cell = 0; cell < result.grid.size(); ++cell) {
            std::string params;
            for (const auto& [key, value] : result.grid[cell]) {
                params += (params.empty() ? "" : " ") + key + "=" +
                          format_double(value, 6);
            }
            rows.push_back({std::to_string(cell), params,
                            result.failed[cell] ? "-"
                                                : format_double(result.scores[cell], 6),
                            result.failed[cell] ? "failed" : "ok",
                            cell == result.best_index ? "best" : ""});
        }
        if (!gs_out.empty()) {
            write_csv(gs_out, {"cell", "params", result.metric, "status", "best"}, rows);
        }
        std::cout << "best cell " << result.best_index << " ("
                  << result.metric << "=" << format_double(result.scores[result.best_index], 6)
                  << ")\n";
    });

    // ---- evaluate ----------------------------------------------------------------
    auto* evaluate = app.add_subcommand("evaluate", "Metrics for one prediction set");
    std::string eval_preds, eval_out_csv, eval_out_json;
    double eval_threshold = 0.5;
    evaluate->add_option("--preds", eval_preds, "Predictions CSV")->required();
    evaluate->add_option("--threshold", eval_threshold, "Accuracy threshold");
    evaluate->add_option("--out-csv", eval_out_csv, "Write the report as CSV");
    evaluate->add_option("--out-json", eval_out_json, "Write the report as JSON");
    evaluate->callback([&] {
        const auto preds = read_predictions_csv(eval_preds);
        const auto report = metrics::report(preds, eval_threshold);
        print_metrics(report);
        if (!eval_out_csv.empty()) metrics::write_metrics_csv({report}, eval_out_csv);
        if (!eval_out_json.empty()) metrics::write_metrics_json({report}, eval_out_json);
    });

    // ---- strength ------------------------------------------------------------------
    auto* strength_cmd = app.add_subcommand(
        "strength", "Probability-vs-score-differential analysis");
    std::string strength_preds, strength_dir = ".";
    double bin_width = 0.1;
    strength_cmd->add_option("--preds", strength_preds, "Predictions CSV")->required();
    strength_cmd->add_option("--bin-width", bin_width, "Probability bin width");
    strength_cmd->add_option("--out-dir", strength_dir, "Directory for bin/range CSVs");
    strength_cmd->callback([&] {
        const auto preds = read_predictions_csv(strength_preds);
        const auto bins = strength::bin_by_probability(preds, bin_width);
        const auto ranges = strength::standard_report_suite(preds);
        strength::FitSummary fit;
        bool have_fit = true;
        try {
            fit = strength::prob_diff_regression(preds);
        } catch (const ConfigError&) {
            have_fit = false;
        }
        const std::string base = "strength_" + preds.model_name;
        strength::write_bins_csv(bins, out_file(strength_dir, base + "_bins.csv"));
        strength::write_ranges_csv(ranges, out_file(strength_dir, base + "_ranges.csv"));
        strength::write_strength_json(bins, ranges, fit,
                                      out_file(strength_dir, base + ".json"));
        if (have_fit) {
            std::cout << preds.model_name << ": slope=" << format_double(fit.slope, 4)
                      << " intercept=" << format_double(fit.intercept, 4)
                      << " r_squared=" << format_double(fit.r_squared, 4) << "\n";
        } else {
            std::cout << preds.model_name
                      << ": constant predictions, no regression\n";
        }
    });

    // ---- ensemble ----------------------------------------------------------------
    auto* ensemble_cmd =
        app.add_subcommand("ensemble", "Agreement matrix and voting triplets");
    std::vector<std::string> ensemble_paths;
    std::string ensemble_dir = ".";
    double ensemble_threshold = 0.5;
    ensemble_cmd->add_option("--preds", ensemble_paths, "Predictions CSVs (>= 2)")
        ->required()
        ->expected(-2);
    ensemble_cmd->add_option("--threshold", ensemble_threshold, "Vote threshold");
    ensemble_cmd->add_option("--out-dir", ensemble_dir, "Directory for output CSVs");
    ensemble_cmd->callback([&] {
        std::vector<PredictionSet> preds;
        preds.reserve(ensemble_paths.size());
        for (const auto& path : ensemble_paths) {
            preds.push_back(read_predictions_csv(path));
        }
        const auto agreement = ensemble::agreement_matrix(preds, ensemble_threshold);
        ensemble::write_agreement_csv(agreement,
                                      out_file(ensemble_dir, "agreement.csv"));
        std::cout << "agreement matrix over " << preds.size() << " models written\n";
        if (preds.size() >= 3) {
            const auto triplets = ensemble::triplet_table(preds, ensemble_threshold);
            ensemble::write_triplets_csv(triplets, out_file(ensemble_dir, "triplets.csv"));
            std::cout << triplets.size() << " triplets written\n";
        }
    });

    // ---- backtest ------------------------------------------------------------------
    auto* backtest = app.add_subcommand("backtest", "Run-line betting backtests");
    std::string bt_preds, bt_odds, bt_dir = ".", bt_grid_arg;
    double bt_stake = 1.0;
    bool bt_naive = false;
    int bt_jobs = 1;
    backtest->add_option("--preds", bt_preds, "Predictions CSV")->required();
    backtest->add_option("--odds", bt_odds, "Run-line odds CSV")->required();
    backtest->add_flag("--naive", bt_naive, "Naive strategy only");
    backtest->add_option("--grid", bt_grid_arg, "Cutoff grid, e.g. 20x20");
    backtest->add_option("--stake", bt_stake, "Flat stake per bet");
    backtest->add_option("--jobs", bt_jobs, "Worker threads for the grid");
    backtest->add_option("--out-dir", bt_dir, "Directory for grid CSVs");
    backtest->callback([&] {
        const auto preds = read_predictions_csv(bt_preds);
        const auto quotes = betting::QuoteStore::load_csv(bt_odds);
        const auto naive = betting::naive_backtest(preds, quotes, bt_stake);
        std::cout << "naive: return " << format_double(naive.return_pct, 2) << "% over "
                  << naive.n_wagered << " bets\n";
        if (!bt_naive) {
            int n_low = 20, n_high = 20;
            if (!bt_grid_arg.empty()) {
                const auto x = bt_grid_arg.find('x');
                if (x == std::string::npos) {
                    throw ConfigError("--grid expects NxM, e.g. 20x20");
                }
                n_low = static_cast<int>(parse_int(bt_grid_arg.substr(0, x), "--grid"));
                n_high = static_cast<int>(parse_int(bt_grid_arg.substr(x + 1), "--grid"));
            }
            const auto grid = betting::grid_search_cutoffs(preds, quotes, n_low, n_high,
                                                           bt_stake, bt_jobs);
            betting::write_grid_csv(grid, out_file(bt_dir, "betting_returns.csv"),
                                    out_file(bt_dir, "betting_wager_fraction.csv"));
            double best = grid.returns_pct.front();
            std::size_t best_idx = 0;
            for (std::size_t i = 0; i < grid.returns_pct.size(); ++i) {
                if (grid.empty_cell[i]) continue;
                if (grid.returns_pct[i] > best) {
                    best = grid.returns_pct[i];
                    best_idx = i;
                }
            }
            const std::size_t nh = grid.high_cutoffs.size();
            std::cout << "grid: best return " << format_double(best, 2) << "% at low="
                      << format_double(grid.low_cutoffs[best_idx / nh], 4)
                      << " high=" << format_double(grid.high_cutoffs[best_idx % nh], 4)
                      << "\n";
        }
    });

    // ---- run --------------------------------------------------------------------
    auto* run = app.add_subcommand("run", "Run the full pipeline from a config file");
    std::string run_config, run_out;
    bool run_emit_reference = false;
    run->add_option("--config", run_config, "Pipeline config file");
    run->add_option("--out", run_out, "Output directory (overrides RUNLINE_LAB_OUT)");
    run->add_flag("--write-reference-config", run_emit_reference,
                  "Print the bundled demo config and exit");
    run->callback([&] {
        if (run_emit_reference) {
            std::cout << pipeline::reference_config_text();
            return;
        }
        if (run_config.empty()) {
            throw ConfigError("run needs --config (or --write-reference-config)");
        }
        std::string out_dir = run_out;
        if (out_dir.empty()) {
            if (const char* env = std::getenv("RUNLINE_LAB_OUT")) out_dir = env;
        }
        if (out_dir.empty()) out_dir = "runline_out";
        const auto config = pipeline::ConfigFile::parse_file(run_config);
        const auto manifest = pipeline::run_pipeline(config, out_dir);
        std::cout << "pipeline complete: " << manifest.output_digests.size()
                  << " artifacts in " << out_dir << "\n";
    });

    // ---- diff --------------------------------------------------------------------
    auto* diff = app.add_subcommand("diff", "Compare two run directories");
    std::string diff_a, diff_b;
    double diff_tolerance = 1e-9;
    diff->add_option("run_a", diff_a, "First run directory")->required();
    diff->add_option("run_b", diff_b, "Second run directory")->required();
    diff->add_option("--tolerance", diff_tolerance, "Absolute numeric tolerance");
    diff->callback([&] {
        const auto report = pipeline::diff_reports(diff_a, diff_b, diff_tolerance);
        for (const auto& line : report.lines) std::cout << line << "\n";
        std::cout << report.summary() << "\n";
        if (!report.within_tolerance) std::exit(2);
    });

    try {
        CLI11_PARSE(app, argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
