#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "runline/csv.hpp"
#include "runline/error.hpp"
#include "runline/pipeline/config.hpp"
#include "runline/pipeline/diff.hpp"
#include "runline/pipeline/manifest.hpp"
#include "runline/pipeline/runner.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace runline;
using namespace runline::pipeline;

TEST_SUITE_BEGIN("pipeline");

namespace {

// A scaled-down demo: every stage on, small enough for unit-test budgets.
const char* kSmallConfig = R"(
[data]
source = synth
[synth]
teams = 6
seasons = 4
games_per_team = 24
seed = 5
[features]
spec = demo
stats_seed = 3
[split]
last_train_season = 2002
[models]
train = homewin,logr,gbdt,ann,elo
seed = 7
gbdt.rounds = 30
ann.epochs = 10
logr.epochs = 120
[betting]
enabled = 1
model = logr
vig = 0.045
grid_low = 8
grid_high = 8
)";

}  // namespace

TEST_CASE("config files parse sections, comments and typed getters") {
    const auto config = ConfigFile::parse_string(
        "# comment\n[alpha]\nkey = value # trailing\nnum = 42\nflag = true\n"
        "[beta]\nrate = 0.5\n",
        "test");
    CHECK(config.get("alpha", "key") == "value");
    CHECK(config.get_int("alpha", "num", 0) == 42);
    CHECK(config.get_bool("alpha", "flag", false));
    CHECK(config.get_double("beta", "rate", 0.0) == doctest::Approx(0.5));
    CHECK(config.get_or("beta", "missing", "fallback") == "fallback");
    CHECK(config.get_double("beta", "missing", 1.5) == 1.5);
    CHECK_THROWS_AS(config.get("beta", "missing"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("[unclosed\n", "test"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("[s]\nnokey\n", "test"), ConfigError);
    CHECK_THROWS_AS(config.get_bool("alpha", "key", false), ConfigError);
}

TEST_CASE("prefixed keys collect per-family hyperparameters") {
    const auto config = ConfigFile::parse_string(
        "[models]\nknn.k = 25\nknn.minkowski_p = 1\ngbdt.rounds = 10\nseed = 3\n",
        "test");
    const auto knn = config.with_prefix("models", "knn.");
    CHECK(knn.size() == 2);
    CHECK(knn.at("k") == "25");
    CHECK(knn.at("minkowski_p") == "1");
    CHECK(config.with_prefix("models", "svm.").empty());
}

TEST_CASE("the reference config parses and lists every stage") {
    const auto config =
        ConfigFile::parse_string(reference_config_text(), "reference");
    CHECK(config.get("data", "source") == "synth");
    CHECK(config.get_int("synth", "seed", 0) == 42);
    CHECK(config.get("models", "train") ==
          "homewin,logr,knn,gbdt,ann,elo");
}

TEST_CASE("run_pipeline produces the full artifact tree") {
    testutil::TempDir tmp("pipeline");
    const auto config = ConfigFile::parse_string(kSmallConfig, "small");
    const auto manifest = run_pipeline(config, tmp.dir());

    // Every declared output exists and parses under its own schema.
    for (const auto& [name, digest] : manifest.output_digests) {
        const std::string path = tmp.file(name);
        REQUIRE(fs::exists(path));
        CHECK(digest == hash_file(path));
        if (name.ends_with(".csv")) CHECK(read_csv(path).rows.size() > 0);
    }
    for (const char* expected :
         {"games.csv", "latent.csv", "team_stats.csv", "feature_spec.txt",
          "features.csv", "predictions_homewin.csv", "predictions_logr.csv",
          "predictions_gbdt.csv", "predictions_ann.csv", "predictions_elo.csv",
          "metrics.csv", "metrics.json", "strength_fits.csv", "agreement.csv",
          "triplets.csv", "odds.csv", "betting_returns.csv",
          "betting_wager_fraction.csv", "betting.json"}) {
        CHECK(manifest.output_digests.count(expected) == 1);
    }
    CHECK(fs::exists(tmp.file("manifest.json")));
    CHECK(manifest.seeds.at("synth") == 5);
    CHECK(manifest.seeds.at("models") == 7);

    const auto loaded = RunManifest::load(tmp.file("manifest.json"));
    CHECK(loaded.output_digests == manifest.output_digests);
    CHECK(loaded.version == manifest.version);
}

TEST_CASE("equal configs produce byte-identical runs; diff agrees") {
    testutil::TempDir a("run_a"), b("run_b");
    const auto config = ConfigFile::parse_string(kSmallConfig, "small");
    const auto ma = run_pipeline(config, a.dir());
    const auto mb = run_pipeline(config, b.dir());
    CHECK(ma.output_digests == mb.output_digests);

    const auto report = diff_reports(a.dir(), b.dir(), 1e-12);
    CHECK(report.within_tolerance);
    CHECK(report.lines.empty());
}

TEST_CASE("changing the model seed perturbs only stochastic artifacts") {
    testutil::TempDir a("seed_a"), b("seed_b");
    auto config = ConfigFile::parse_string(kSmallConfig, "small");
    run_pipeline(config, a.dir());
    config.set("models", "seed", "8");
    run_pipeline(config, b.dir());

    const auto report = diff_reports(a.dir(), b.dir(), 1e-12);
    CHECK(!report.within_tolerance);
    for (const char* stable :
         {"games.csv", "latent.csv", "team_stats.csv", "features.csv",
          "predictions_homewin.csv", "predictions_logr.csv", "predictions_elo.csv",
          "odds.csv"}) {
        for (const auto& line : report.lines) {
            CHECK(line.find(stable) == std::string::npos);
        }
    }
    bool ann_differs = false;
    for (const auto& line : report.lines) {
        if (line.find("predictions_ann.csv") != std::string::npos) ann_differs = true;
    }
    CHECK(ann_differs);

    // A huge tolerance accepts every numeric difference.
    const auto loose = diff_reports(a.dir(), b.dir(), 1e9);
    CHECK(loose.within_tolerance);
    CHECK(loose.files_differing <= report.files_differing);
}

TEST_CASE("stage failures name the stage and the cause") {
    testutil::TempDir tmp("fail");
    auto config = ConfigFile::parse_string(kSmallConfig, "small");
    config.set("data", "source", "csv");
    config.set("data", "games", tmp.file("missing.csv"));
    CHECK_THROWS_WITH_AS(run_pipeline(config, tmp.dir()),
                         doctest::Contains("stage data"), Error);

    auto bad_betting = ConfigFile::parse_string(kSmallConfig, "small");
    bad_betting.set("betting", "odds", tmp.file("no_odds.csv"));
    CHECK_THROWS_WITH_AS(run_pipeline(bad_betting, tmp.dir()),
                         doctest::Contains("no_odds.csv"), Error);

    auto bad_model = ConfigFile::parse_string(kSmallConfig, "small");
    bad_model.set("betting", "model", "knn");  // not in models.train
    CHECK_THROWS_WITH_AS(run_pipeline(bad_model, tmp.dir()),
                         doctest::Contains("stage betting"), Error);
}

TEST_CASE("diff requires manifests") {
    testutil::TempDir a("nodir_a"), b("nodir_b");
    CHECK_THROWS_AS(diff_reports(a.dir(), b.dir()), Error);
}

TEST_CASE("file hashing is content-based") {
    testutil::TempDir tmp("hash");
    testutil::write_text(tmp.file("x.txt"), "alpha");
    testutil::write_text(tmp.file("y.txt"), "alpha");
    testutil::write_text(tmp.file("z.txt"), "beta");
    CHECK(hash_file(tmp.file("x.txt")) == hash_file(tmp.file("y.txt")));
    CHECK(hash_file(tmp.file("x.txt")) != hash_file(tmp.file("z.txt")));
}

TEST_SUITE_END();
