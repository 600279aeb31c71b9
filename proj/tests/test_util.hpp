// Shared fixtures for the unit and acceptance suites.
#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "runline/data/synthetic.hpp"
#include "runline/features/feature_matrix.hpp"
#include "runline/math.hpp"
#include "runline/prediction.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("runline_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string dir() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

/// Feature matrix from explicit rows. Seasons default to 2001 everywhere;
/// score differentials default to +1 for home wins and -1 otherwise.
inline runline::features::FeatureMatrix make_matrix(
    const std::vector<std::vector<double>>& rows,
    const std::vector<std::uint8_t>& labels, std::vector<int> seasons = {},
    std::vector<int> diffs = {}) {
    runline::features::FeatureMatrix m;
    const std::size_t d = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < d; ++c) m.column_names.push_back("x" + std::to_string(c));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        m.game_ids.push_back("g" + std::to_string(r));
        m.seasons.push_back(seasons.empty() ? 2001 : seasons[r]);
        m.labels.push_back(labels[r]);
        m.score_diffs.push_back(diffs.empty() ? (labels[r] ? 1 : -1) : diffs[r]);
        for (double v : rows[r]) m.values.push_back(v);
    }
    m.validate();
    return m;
}

inline runline::PredictionSet make_preds(const std::vector<double>& p,
                                         const std::vector<std::uint8_t>& labels,
                                         std::vector<int> diffs = {},
                                         const std::string& name = "test") {
    runline::PredictionSet out;
    out.model_name = name;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.game_ids.push_back("g" + std::to_string(i));
        out.p_home.push_back(p[i]);
        out.labels.push_back(labels[i]);
        out.score_diffs.push_back(diffs.empty() ? (labels[i] ? 1 : -1) : diffs[i]);
    }
    out.validate();
    return out;
}

/// Random prediction set with probabilities on a lattice so ties occur.
inline runline::PredictionSet random_preds(std::mt19937_64& rng, std::size_t n,
                                           bool lattice = true) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> lattice_p(0, 20);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> margin(1, 9);
    std::vector<double> p(n);
    std::vector<std::uint8_t> y(n);
    std::vector<int> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = lattice ? lattice_p(rng) / 20.0 : u(rng);
        y[i] = static_cast<std::uint8_t>(coin(rng));
        d[i] = y[i] ? margin(rng) : -margin(rng);
    }
    return make_preds(p, y, d);
}

/// Dataset + single-column matrix whose feature is the true strength gap
/// (home minus away). The generator itself is the oracle: the Bayes-optimal
/// coefficients are beta_1 = 1, beta_0 = home_advantage.
struct GapCorpus {
    runline::SynthResult synth;
    runline::features::FeatureMatrix matrix;
};

inline GapCorpus gap_corpus(const runline::SyntheticConfig& config) {
    GapCorpus out;
    out.synth = runline::generate_synthetic(config);
    auto& m = out.matrix;
    m.column_names = {"strength_gap"};
    for (const auto& g : out.synth.games.games()) {
        m.game_ids.push_back(g.game_id);
        m.seasons.push_back(g.season);
        m.labels.push_back(g.home_win() ? 1 : 0);
        m.score_diffs.push_back(g.score_diff());
        m.values.push_back(out.synth.latent.at(g.home_team) -
                           out.synth.latent.at(g.away_team));
    }
    m.validate();
    return out;
}

/// Four gaussian clusters at (+-1, +-1); label = XOR of the quadrant signs.
/// Linearly inseparable, the canonical kernel / hidden-layer test.
inline runline::features::FeatureMatrix xor_clusters(std::size_t n,
                                                     std::uint64_t seed,
                                                     double noise = 0.2) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, noise);
    std::vector<std::vector<double>> rows;
    std::vector<std::uint8_t> labels;
    for (std::size_t i = 0; i < n; ++i) {
        const double sx = (i & 1) ? 1.0 : -1.0;
        const double sy = (i & 2) ? 1.0 : -1.0;
        rows.push_back({sx + jitter(rng), sy + jitter(rng)});
        labels.push_back((sx * sy > 0) ? 1 : 0);
    }
    return make_matrix(rows, labels);
}

}  // namespace testutil
