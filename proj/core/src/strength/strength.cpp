#include "runline/strength/strength.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "runline/csv.hpp"
#include "runline/error.hpp"
#include "runline/math.hpp"

namespace runline::strength {

namespace {

void summarize(const std::vector<double>& diffs, std::size_t& n,
               std::optional<double>& mean_out, std::optional<double>& sd_out) {
    n = diffs.size();
    if (n >= 1) mean_out = mean(diffs);
    if (n >= 2) sd_out = sample_sd(diffs);
}

}  // namespace

std::vector<BinSummary> bin_by_probability(const PredictionSet& preds,
                                           double bin_width) {
    if (preds.empty()) throw ConfigError("bin_by_probability: empty prediction set");
    if (!(bin_width > 0.0) || bin_width > 1.0) {
        throw ConfigError("bin_by_probability: bin width must lie in (0,1]");
    }
    const double n_bins_real = 1.0 / bin_width;
    const auto n_bins = static_cast<std::size_t>(std::llround(n_bins_real));
    if (std::abs(n_bins_real - static_cast<double>(n_bins)) > 1e-9) {
        throw ConfigError("bin_by_probability: bin width must divide 1 evenly");
    }

    std::vector<std::vector<double>> buckets(n_bins + 1);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        auto idx = static_cast<std::size_t>(std::llround(preds.p_home[i] / bin_width));
        idx = std::min(idx, n_bins);
        buckets[idx].push_back(static_cast<double>(preds.score_diffs[i]));
    }
    std::vector<BinSummary> bins(n_bins + 1);
    for (std::size_t b = 0; b <= n_bins; ++b) {
        bins[b].bin_center = static_cast<double>(b) * bin_width;
        summarize(buckets[b], bins[b].n_games, bins[b].mean_diff, bins[b].sd_diff);
    }
    return bins;
}

FitSummary prob_diff_regression(const PredictionSet& preds) {
    if (preds.size() < 3) {
        throw ConfigError("prob_diff_regression: need at least 3 games");
    }
    const double n = static_cast<double>(preds.size());
    double sum_p = 0.0, sum_d = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        sum_p += preds.p_home[i];
        sum_d += preds.score_diffs[i];
    }
    const double mean_p = sum_p / n;
    const double mean_d = sum_d / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double dp = preds.p_home[i] - mean_p;
        const double dd = static_cast<double>(preds.score_diffs[i]) - mean_d;
        sxx += dp * dp;
        sxy += dp * dd;
        syy += dd * dd;
    }
    if (sxx < 1e-15) {
        throw ConfigError("prob_diff_regression: constant predictions for model '" +
                          preds.model_name + "', slope undefined");
    }
    FitSummary fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_d - fit.slope * mean_p;
    if (syy < 1e-15) {
        fit.r_squared = 1.0;  // all residuals are zero
    } else {
        double sse = 0.0;
        for (std::size_t i = 0; i < preds.size(); ++i) {
            const double r = static_cast<double>(preds.score_diffs[i]) -
                             (fit.intercept + fit.slope * preds.p_home[i]);
            sse += r * r;
        }
        fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
    }
    return fit;
}

RangeReport range_report(const PredictionSet& preds, double low, double high) {
    if (!(low >= 0.0 && low < high && high <= 1.0)) {
        throw ConfigError("range_report: need 0 <= low < high <= 1");
    }
    std::vector<double> diffs;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds.p_home[i] >= low && preds.p_home[i] <= high) {
            diffs.push_back(static_cast<double>(preds.score_diffs[i]));
        }
    }
    RangeReport report;
    report.model_name = preds.model_name;
    report.low = low;
    report.high = high;
    summarize(diffs, report.n_games, report.mean_diff, report.sd_diff);
    return report;
}

std::vector<RangeReport> standard_report_suite(const PredictionSet& preds) {
    static constexpr std::pair<double, double> kRanges[] = {
        {0.45, 0.55}, {0.49, 0.51}, {0.75, 1.00},
        {0.85, 1.00}, {0.00, 0.25}, {0.00, 0.15}};
    std::vector<RangeReport> out;
    out.reserve(std::size(kRanges));
    for (const auto& [low, high] : kRanges) {
        out.push_back(range_report(preds, low, high));
    }
    return out;
}

namespace {

std::string opt_str(const std::optional<double>& v, int precision) {
    return v ? format_double(*v, precision) : "-";
}

}  // namespace

void write_bins_csv(const std::vector<BinSummary>& bins, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(bins.size());
    for (const auto& b : bins) {
        rows.push_back({format_double(b.bin_center, 2), std::to_string(b.n_games),
                        opt_str(b.mean_diff, 4), opt_str(b.sd_diff, 4)});
    }
    write_csv(path, {"bin_center", "n", "mean_diff", "sd_diff"}, rows);
}

void write_ranges_csv(const std::vector<RangeReport>& ranges,
                      const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(ranges.size());
    for (const auto& r : ranges) {
        rows.push_back({r.model_name, format_double(r.low, 2), format_double(r.high, 2),
                        std::to_string(r.n_games), opt_str(r.mean_diff, 4),
                        opt_str(r.sd_diff, 4)});
    }
    write_csv(path, {"model", "low", "high", "n_games", "mean_diff", "sd_diff"}, rows);
}

void write_strength_json(const std::vector<BinSummary>& bins,
                         const std::vector<RangeReport>& ranges,
                         const FitSummary& fit, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["fit"] = {{"slope", fit.slope},
                  {"intercept", fit.intercept},
                  {"r_squared", fit.r_squared}};
    auto& jbins = doc["bins"] = nlohmann::ordered_json::array();
    for (const auto& b : bins) {
        nlohmann::ordered_json jb = {{"bin_center", b.bin_center},
                                     {"n", b.n_games}};
        if (b.mean_diff) jb["mean_diff"] = *b.mean_diff;
        if (b.sd_diff) jb["sd_diff"] = *b.sd_diff;
        jbins.push_back(std::move(jb));
    }
    auto& jranges = doc["ranges"] = nlohmann::ordered_json::array();
    for (const auto& r : ranges) {
        nlohmann::ordered_json jr = {{"model", r.model_name},
                                     {"low", r.low},
                                     {"high", r.high},
                                     {"n_games", r.n_games}};
        if (r.mean_diff) jr["mean_diff"] = *r.mean_diff;
        if (r.sd_diff) jr["sd_diff"] = *r.sd_diff;
        jranges.push_back(std::move(jr));
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

}  // namespace runline::strength
