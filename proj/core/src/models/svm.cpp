#include "runline/models/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "runline/error.hpp"
#include "runline/math.hpp"

namespace runline::models {

namespace {

// Stratified, seeded index sample of at most `cap` rows.
std::vector<std::size_t> stratified_sample(const std::vector<std::uint8_t>& labels,
                                           std::size_t cap, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] ? pos : neg).push_back(i);
    }
    if (labels.size() <= cap) {
        std::vector<std::size_t> all(labels.size());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    std::mt19937_64 rng(seed);
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    const double frac = static_cast<double>(cap) / static_cast<double>(labels.size());
    std::size_t n_pos = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::round(frac * static_cast<double>(pos.size()))));
    n_pos = std::min(n_pos, std::min(pos.size(), cap - 1));
    std::size_t n_neg = std::min(neg.size(), cap - n_pos);
    std::vector<std::size_t> out(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(n_pos));
    out.insert(out.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(n_neg));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

SvmClassifier::SvmClassifier(SvmConfig config)
    : ProbClassifier("svm"), config_(config) {
    if (config_.c <= 0) throw ConfigError("svm: c must be > 0");
    if (config_.gamma < 0) throw ConfigError("svm: gamma must be >= 0");
    if (config_.subsample_cap < 2) throw ConfigError("svm: subsample_cap must be >= 2");
    if (config_.platt_holdout <= 0 || config_.platt_holdout >= 0.9) {
        throw ConfigError("svm: platt_holdout must lie in (0, 0.9)");
    }
}

std::map<std::string, double> SvmClassifier::hyperparameters() const {
    return {{"c", config_.c},
            {"gamma", config_.gamma},
            {"subsample_cap", static_cast<double>(config_.subsample_cap)},
            {"tol", config_.tol},
            {"standardize", config_.standardize ? 1.0 : 0.0}};
}

double SvmClassifier::kernel(const double* a, const double* b) const {
    double ss = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) {
        const double dx = a[c] - b[c];
        ss += dx * dx;
    }
    return std::exp(-gamma_ * ss);
}

SvmClassifier::SmoResult SvmClassifier::run_smo(const std::vector<double>& x,
                                                const std::vector<double>& y,
                                                std::uint64_t seed) const {
    const std::size_t n = y.size();
    const double c_bound = config_.c;
    const double tol = config_.tol;

    // Precompute the kernel matrix when it fits comfortably in memory.
    const bool cache = n <= 2600;
    std::vector<double> kmat;
    if (cache) {
        kmat.resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double* xi = x.data() + i * dim_;
            kmat[i * n + i] = 1.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double k = kernel(xi, x.data() + j * dim_);
                kmat[i * n + j] = k;
                kmat[j * n + i] = k;
            }
        }
    }
    long long evals = 0;
    auto kval = [&](std::size_t i, std::size_t j) {
        if (cache) return kmat[i * n + j];
        ++evals;
        return kernel(x.data() + i * dim_, x.data() + j * dim_);
    };

    std::vector<double> alpha(n, 0.0);
    std::vector<double> f(n, 0.0);  // decision values including bias
    double bias = 0.0;
    std::mt19937_64 rng(seed);

    auto try_step = [&](std::size_t i, std::size_t j) -> bool {
        if (i == j) return false;
        const double ei = f[i] - y[i];
        const double ej = f[j] - y[j];
        double low, high;
        if (y[i] != y[j]) {
            low = std::max(0.0, alpha[j] - alpha[i]);
            high = std::min(c_bound, c_bound + alpha[j] - alpha[i]);
        } else {
            low = std::max(0.0, alpha[i] + alpha[j] - c_bound);
            high = std::min(c_bound, alpha[i] + alpha[j]);
        }
        if (low >= high) return false;
        const double kii = 1.0;
        const double kjj = 1.0;
        const double kij = kval(i, j);
        const double eta = 2.0 * kij - kii - kjj;
        if (eta >= -1e-12) return false;
        double aj = alpha[j] - y[j] * (ei - ej) / eta;
        aj = std::clamp(aj, low, high);
        if (std::abs(aj - alpha[j]) < 1e-8 * (aj + alpha[j] + 1e-8)) return false;
        const double ai = alpha[i] + y[i] * y[j] * (alpha[j] - aj);

        const double di = y[i] * (ai - alpha[i]);
        const double dj = y[j] * (aj - alpha[j]);
        const double b1 = bias - ei - di * kii - dj * kij;
        const double b2 = bias - ej - di * kij - dj * kjj;
        double new_bias;
        if (ai > 0 && ai < c_bound) new_bias = b1;
        else if (aj > 0 && aj < c_bound) new_bias = b2;
        else new_bias = 0.5 * (b1 + b2);

        const double db = new_bias - bias;
        for (std::size_t k = 0; k < n; ++k) {
            f[k] += di * kval(i, k) + dj * kval(j, k) + db;
        }
        alpha[i] = ai;
        alpha[j] = aj;
        bias = new_bias;
        return true;
    };

    int passes = 0;
    int sweeps = 0;
    const int max_sweeps = 4000;
    bool converged = false;
    while (passes < config_.max_passes && sweeps < max_sweeps) {
        ++sweeps;
        if (!cache && evals > config_.max_kernel_evals) break;
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] * (f[i] - y[i]);
            const bool violates = (r < -tol && alpha[i] < c_bound) ||
                                  (r > tol && alpha[i] > 0);
            if (!violates) continue;
            // Second choice: the largest error gap, then seeded random tries.
            std::size_t best_j = i;
            double best_gap = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double gap = std::abs((f[i] - y[i]) - (f[j] - y[j]));
                if (gap > best_gap) {
                    best_gap = gap;
                    best_j = j;
                }
            }
            bool stepped = best_j != i && try_step(i, best_j);
            for (int attempt = 0; !stepped && attempt < 8; ++attempt) {
                stepped = try_step(i, rng() % n);
            }
            if (stepped) ++changed;
        }
        passes = changed == 0 ? passes + 1 : 0;
        if (changed == 0 && passes >= config_.max_passes) {
            converged = true;
        }
    }
    if (!converged) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = y[i] * f[i];
            if (alpha[i] < 1e-9) worst = std::max(worst, 1.0 - m);
            else if (alpha[i] > c_bound - 1e-9) worst = std::max(worst, m - 1.0);
            else worst = std::max(worst, std::abs(m - 1.0));
        }
        throw Error("svm: SMO did not converge within its iteration budget; "
                    "max KKT violation still " + std::to_string(worst));
    }
    return {std::move(alpha), bias};
}

double SvmClassifier::decision_std(const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   const SmoResult& smo, const double* row) const {
    double s = smo.bias;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (smo.alpha[i] <= 0.0) continue;
        s += smo.alpha[i] * y[i] * kernel(x.data() + i * dim_, row);
    }
    return s;
}

void SvmClassifier::do_fit(const FeatureMatrix& train) {
    dim_ = train.cols();
    gamma_ = config_.gamma > 0 ? config_.gamma : 1.0 / static_cast<double>(dim_);

    const auto subsample = stratified_sample(
        train.labels, static_cast<std::size_t>(config_.subsample_cap), config_.seed);
    FeatureMatrix sub = train.subset(subsample);

    scaler_ = Standardizer();
    std::vector<double> x;
    if (config_.standardize) {
        scaler_.fit(sub);
        x = scaler_.transform(sub);
    } else {
        x = sub.values;
    }
    std::vector<double> y(sub.rows());
    for (std::size_t i = 0; i < sub.rows(); ++i) y[i] = sub.labels[i] ? 1.0 : -1.0;

    // Platt scaling on an internal holdout: train SMO on the remainder,
    // collect out-of-sample decision values, then refit on everything.
    const auto holdout_size = static_cast<std::size_t>(
        std::round(config_.platt_holdout * static_cast<double>(sub.rows())));
    std::vector<std::size_t> order(sub.rows());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(config_.seed ^ 0x9e3779b97f4a7c15ULL);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> platt_f;
    std::vector<std::uint8_t> platt_y;
    if (holdout_size >= 4 && sub.rows() - holdout_size >= 4) {
        std::vector<std::size_t> inner(order.begin() + static_cast<std::ptrdiff_t>(holdout_size),
                                       order.end());
        std::sort(inner.begin(), inner.end());
        std::vector<double> xi;
        std::vector<double> yi;
        xi.reserve(inner.size() * dim_);
        for (std::size_t idx : inner) {
            xi.insert(xi.end(), x.data() + idx * dim_, x.data() + (idx + 1) * dim_);
            yi.push_back(y[idx]);
        }
        bool both = false, pos = false, neg = false;
        for (std::size_t o = 0; o < holdout_size; ++o) {
            (y[order[o]] > 0 ? pos : neg) = true;
        }
        both = pos && neg;
        if (both) {
            const SmoResult inner_fit = run_smo(xi, yi, config_.seed + 1);
            for (std::size_t o = 0; o < holdout_size; ++o) {
                const std::size_t idx = order[o];
                platt_f.push_back(decision_std(xi, yi, inner_fit, x.data() + idx * dim_));
                platt_y.push_back(y[idx] > 0 ? 1 : 0);
            }
        }
    }

    const SmoResult full = run_smo(x, y, config_.seed + 2);

    // Keep only the support vectors.
    sv_values_.clear();
    sv_coeff_.clear();
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (full.alpha[i] <= 0.0) continue;
        sv_values_.insert(sv_values_.end(), x.data() + i * dim_,
                          x.data() + (i + 1) * dim_);
        sv_coeff_.push_back(full.alpha[i] * y[i]);
    }
    bias_ = full.bias;

    // KKT residuals over the full subsample.
    max_kkt_violation_ = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double f = bias_;
        for (std::size_t s = 0; s < sv_coeff_.size(); ++s) {
            f += sv_coeff_[s] * kernel(sv_values_.data() + s * dim_, x.data() + i * dim_);
        }
        const double m = y[i] * f;
        double v;
        if (full.alpha[i] < 1e-9) v = std::max(0.0, 1.0 - m);
        else if (full.alpha[i] > config_.c - 1e-9) v = std::max(0.0, m - 1.0);
        else v = std::abs(m - 1.0);
        max_kkt_violation_ = std::max(max_kkt_violation_, v);
    }

    if (platt_f.empty()) {
        // Holdout unusable (tiny or single-class): fall back to in-sample
        // decision values.
        for (std::size_t i = 0; i < y.size(); ++i) {
            double f = bias_;
            for (std::size_t s = 0; s < sv_coeff_.size(); ++s) {
                f += sv_coeff_[s] *
                     kernel(sv_values_.data() + s * dim_, x.data() + i * dim_);
            }
            platt_f.push_back(f);
            platt_y.push_back(y[i] > 0 ? 1 : 0);
        }
    }

    // Newton fit of p = sigmoid(a*f + b) against Platt's smoothed targets.
    std::size_t n_pos = 0;
    for (std::uint8_t t : platt_y) n_pos += t;
    const std::size_t n_neg = platt_y.size() - n_pos;
    const double t_pos = (static_cast<double>(n_pos) + 1.0) / (static_cast<double>(n_pos) + 2.0);
    const double t_neg = 1.0 / (static_cast<double>(n_neg) + 2.0);
    double a = 1.0, b = 0.0;
    auto platt_loss = [&](double aa, double bb) {
        double loss = 0.0;
        for (std::size_t i = 0; i < platt_f.size(); ++i) {
            const double t = platt_y[i] ? t_pos : t_neg;
            const double p = std::clamp(sigmoid(aa * platt_f[i] + bb), 1e-12, 1.0 - 1e-12);
            loss += -(t * std::log(p) + (1.0 - t) * std::log1p(-p));
        }
        return loss;
    };
    double loss = platt_loss(a, b);
    for (int iter = 0; iter < 100; ++iter) {
        double ga = 0, gb = 0, haa = 0, hab = 0, hbb = 0;
        for (std::size_t i = 0; i < platt_f.size(); ++i) {
            const double t = platt_y[i] ? t_pos : t_neg;
            const double p = sigmoid(a * platt_f[i] + b);
            const double w = std::max(p * (1.0 - p), 1e-12);
            ga += (p - t) * platt_f[i];
            gb += (p - t);
            haa += w * platt_f[i] * platt_f[i];
            hab += w * platt_f[i];
            hbb += w;
        }
        const double det = haa * hbb - hab * hab;
        double da, db;
        if (std::abs(det) > 1e-12) {
            da = -(hbb * ga - hab * gb) / det;
            db = -(-hab * ga + haa * gb) / det;
        } else {
            da = -ga * 1e-3;
            db = -gb * 1e-3;
        }
        double scale = 1.0;
        bool accepted = false;
        for (int half = 0; half < 30; ++half) {
            const double new_loss = platt_loss(a + scale * da, b + scale * db);
            if (new_loss <= loss) {
                a += scale * da;
                b += scale * db;
                loss = new_loss;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted || (std::abs(da) < 1e-10 && std::abs(db) < 1e-10)) break;
    }
    platt_a_ = a;
    platt_b_ = b;
}

double SvmClassifier::decision_value(const double* row, std::size_t dim) const {
    if (!fitted()) throw ConfigError("svm: decision_value before fit");
    if (dim != dim_) throw ConfigError("svm: feature dimension mismatch");
    std::vector<double> std_row(dim_);
    for (std::size_t c = 0; c < dim_; ++c) {
        std_row[c] = config_.standardize ? scaler_.transform_one(row[c], c) : row[c];
    }
    double s = bias_;
    for (std::size_t i = 0; i < sv_coeff_.size(); ++i) {
        s += sv_coeff_[i] * kernel(sv_values_.data() + i * dim_, std_row.data());
    }
    return s;
}

double SvmClassifier::max_kkt_violation() const {
    if (!fitted()) throw ConfigError("svm: max_kkt_violation before fit");
    return max_kkt_violation_;
}

std::vector<double> SvmClassifier::do_predict(const FeatureMatrix& x) const {
    if (x.cols() != dim_) {
        throw ConfigError("svm: expected " + std::to_string(dim_) + " features");
    }
    std::vector<double> probs(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double f = decision_value(x.row_ptr(r), dim_);
        probs[r] = sigmoid(platt_a_ * f + platt_b_);
    }
    return probs;
}

}  // namespace runline::models
