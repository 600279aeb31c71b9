#include "runline/data/synthetic.hpp"

#include <cstdio>
#include <random>

#include "runline/csv.hpp"
#include "runline/error.hpp"
#include "runline/math.hpp"

namespace runline {

namespace {

std::string team_code(int index) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "T%02d", index + 1);
    return buf;
}

std::string synth_game_id(int season, int counter) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%04d-%05d", season, counter);
    return buf;
}

}  // namespace

void SyntheticConfig::validate() const {
    if (n_teams < 2) throw ConfigError("synthetic: need at least 2 teams");
    if (n_seasons < 1) throw ConfigError("synthetic: need at least 1 season");
    if (games_per_team < 1) throw ConfigError("synthetic: games_per_team must be positive");
    if (run_scale <= 0) throw ConfigError("synthetic: run_scale must be > 0");
    if (strength_spread < 0) throw ConfigError("synthetic: strength_spread must be >= 0");
    if (first_season < 1900 || first_season > 9000) {
        throw ConfigError("synthetic: first_season out of range");
    }
}

SynthResult generate_synthetic(const SyntheticConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);

    SynthResult result;
    std::vector<std::string> teams;
    teams.reserve(static_cast<std::size_t>(config.n_teams));
    {
        std::normal_distribution<double> strength(0.0, 1.0);
        for (int t = 0; t < config.n_teams; ++t) {
            teams.push_back(team_code(t));
            const double s =
                config.strength_spread > 0 ? strength(rng) * config.strength_spread : 0.0;
            result.latent.emplace(teams.back(), s);
        }
    }

    // Circle-method round robin; slot n-1 is a bye when n_teams is odd.
    const int n = config.n_teams + (config.n_teams % 2);
    std::vector<int> ring(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ring[static_cast<std::size_t>(i)] = i;

    std::vector<GameRecord> games;
    std::bernoulli_distribution coin;  // parameterized per game below
    for (int season_idx = 0; season_idx < config.n_seasons; ++season_idx) {
        const int season = config.first_season + season_idx;
        const Date opening_day{season, 4, 1};

        std::vector<int> played(static_cast<std::size_t>(config.n_teams), 0);
        std::vector<std::pair<int, int>> schedule;  // (round, home) x (away) pairs
        std::vector<std::pair<int, int>> matchups;
        std::vector<int> rounds_of;
        // Rebuild the ring each season so seasons are independent of order.
        for (int i = 0; i < n; ++i) ring[static_cast<std::size_t>(i)] = i;

        int round = 0;
        const int max_rounds = config.games_per_team * (n + 1) + n;
        bool done = false;
        while (!done && round < max_rounds) {
            const int cycle = round / (n - 1);
            for (int i = 0; i < n / 2; ++i) {
                int a = ring[static_cast<std::size_t>(i)];
                int b = ring[static_cast<std::size_t>(n - 1 - i)];
                if (a >= config.n_teams || b >= config.n_teams) continue;  // bye
                if (played[static_cast<std::size_t>(a)] >= config.games_per_team ||
                    played[static_cast<std::size_t>(b)] >= config.games_per_team) {
                    continue;
                }
                // Alternate orientation by cycle and slot so home games balance.
                const bool a_home = ((cycle + i) % 2 == 0);
                matchups.emplace_back(a_home ? a : b, a_home ? b : a);
                rounds_of.push_back(round);
                ++played[static_cast<std::size_t>(a)];
                ++played[static_cast<std::size_t>(b)];
            }
            // Rotate all but the first slot.
            std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
            ++round;
            done = true;
            for (int t = 0; t < config.n_teams; ++t) {
                if (played[static_cast<std::size_t>(t)] < config.games_per_team) {
                    done = false;
                    break;
                }
            }
        }

        const int total_rounds = rounds_of.empty() ? 1 : rounds_of.back() + 1;
        int counter = 0;
        for (std::size_t m = 0; m < matchups.size(); ++m) {
            const auto [home, away] = matchups[m];
            GameRecord g;
            g.season = season;
            // Spread rounds across a 183-day season window.
            g.date = add_days(opening_day, rounds_of[m] * 183LL / total_rounds);
            g.game_id = synth_game_id(season, counter++);
            g.home_team = teams[static_cast<std::size_t>(home)];
            g.away_team = teams[static_cast<std::size_t>(away)];

            const double gap =
                result.latent.at(g.home_team) - result.latent.at(g.away_team);
            const double p_home = sigmoid(gap + config.home_advantage);
            coin.param(std::bernoulli_distribution::param_type(p_home));
            const bool home_won = coin(rng);

            std::poisson_distribution<int> extra_margin(
                margin_poisson_rate(config.run_scale, gap));
            const int margin = 1 + extra_margin(rng);
            std::poisson_distribution<int> loser_runs_dist(3.2);
            const int loser_runs = loser_runs_dist(rng);
            if (home_won) {
                g.home_score = loser_runs + margin;
                g.away_score = loser_runs;
            } else {
                g.home_score = loser_runs;
                g.away_score = loser_runs + margin;
            }
            games.push_back(std::move(g));
        }
    }

    result.games = Dataset::from_games(std::move(games));
    return result;
}

void write_latent_csv(const std::map<std::string, double>& latent,
                      const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(latent.size());
    for (const auto& [team, strength] : latent) {
        rows.push_back({team, format_double(strength, 12)});
    }
    write_csv(path, {"team", "strength"}, rows);
}

std::map<std::string, double> read_latent_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::size_t c_team = table.column("team");
    const std::size_t c_strength = table.column("strength");
    std::map<std::string, double> latent;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string where =
            path + " line " + std::to_string(table.line_numbers[r]);
        latent[table.rows[r][c_team]] =
            parse_double(table.rows[r][c_strength], where);
    }
    return latent;
}

}  // namespace runline
