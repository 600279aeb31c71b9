#include "runline/pipeline/diff.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "runline/csv.hpp"
#include "runline/error.hpp"
#include "runline/pipeline/manifest.hpp"

namespace fs = std::filesystem;

namespace runline::pipeline {

namespace {

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

struct FileDiff {
    bool schema_mismatch = false;
    std::size_t cells_differing = 0;
    double max_abs_diff = 0.0;
};

FileDiff diff_csv(const std::string& a, const std::string& b, double tol) {
    FileDiff diff;
    const CsvTable ta = read_csv(a);
    const CsvTable tb = read_csv(b);
    if (ta.header != tb.header || ta.rows.size() != tb.rows.size()) {
        diff.schema_mismatch = true;
        return diff;
    }
    for (std::size_t r = 0; r < ta.rows.size(); ++r) {
        for (std::size_t c = 0; c < ta.header.size(); ++c) {
            const std::string& fa = ta.rows[r][c];
            const std::string& fb = tb.rows[r][c];
            if (fa == fb) continue;
            double xa, xb;
            if (parse_number(fa, xa) && parse_number(fb, xb)) {
                const double d = std::abs(xa - xb);
                if (d > tol) {
                    ++diff.cells_differing;
                    diff.max_abs_diff = std::max(diff.max_abs_diff, d);
                }
            } else {
                ++diff.cells_differing;
            }
        }
    }
    return diff;
}

void diff_json_value(const nlohmann::json& a, const nlohmann::json& b, double tol,
                     FileDiff& diff) {
    if (a.is_number() && b.is_number()) {
        const double d = std::abs(a.get<double>() - b.get<double>());
        if (d > tol) {
            ++diff.cells_differing;
            diff.max_abs_diff = std::max(diff.max_abs_diff, d);
        }
        return;
    }
    if (a.type() != b.type()) {
        diff.schema_mismatch = true;
        return;
    }
    if (a.is_object()) {
        std::set<std::string> keys;
        for (const auto& [k, v] : a.items()) keys.insert(k);
        for (const auto& [k, v] : b.items()) keys.insert(k);
        for (const auto& k : keys) {
            if (!a.contains(k) || !b.contains(k)) {
                diff.schema_mismatch = true;
                continue;
            }
            diff_json_value(a.at(k), b.at(k), tol, diff);
        }
        return;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) {
            diff.schema_mismatch = true;
            return;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            diff_json_value(a[i], b[i], tol, diff);
        }
        return;
    }
    if (a != b) ++diff.cells_differing;
}

FileDiff diff_json(const std::string& a, const std::string& b, double tol) {
    FileDiff diff;
    nlohmann::json ja, jb;
    std::ifstream ia(a), ib(b);
    try {
        ia >> ja;
        ib >> jb;
    } catch (const nlohmann::json::exception&) {
        diff.schema_mismatch = true;
        return diff;
    }
    diff_json_value(ja, jb, tol, diff);
    return diff;
}

FileDiff diff_text(const std::string& a, const std::string& b) {
    FileDiff diff;
    std::ifstream ia(a), ib(b);
    std::string la, lb;
    while (true) {
        const bool ga = static_cast<bool>(std::getline(ia, la));
        const bool gb = static_cast<bool>(std::getline(ib, lb));
        if (!ga && !gb) break;
        if (ga != gb || la != lb) ++diff.cells_differing;
        if (!ga || !gb) break;
    }
    return diff;
}

std::string ends_with_ext(const std::string& name) {
    const auto dot = name.find_last_of('.');
    return dot == std::string::npos ? "" : name.substr(dot);
}

}  // namespace

std::string DiffReport::summary() const {
    if (within_tolerance) {
        return "identical within tolerance (" + std::to_string(files_compared) +
               " files compared)";
    }
    return std::to_string(files_differing) + " of " + std::to_string(files_compared) +
           " files differ";
}

DiffReport diff_reports(const std::string& run_a, const std::string& run_b,
                        double tolerance) {
    const RunManifest ma = RunManifest::load((fs::path(run_a) / "manifest.json").string());
    const RunManifest mb = RunManifest::load((fs::path(run_b) / "manifest.json").string());

    std::set<std::string> names;
    for (const auto& [name, digest] : ma.output_digests) names.insert(name);
    for (const auto& [name, digest] : mb.output_digests) names.insert(name);

    DiffReport report;
    for (const auto& name : names) {
        ++report.files_compared;
        const auto ita = ma.output_digests.find(name);
        const auto itb = mb.output_digests.find(name);
        if (ita == ma.output_digests.end() || itb == mb.output_digests.end()) {
            ++report.files_differing;
            report.lines.push_back(name + ": present in only one run");
            continue;
        }
        if (ita->second == itb->second) continue;  // byte-identical

        const std::string pa = (fs::path(run_a) / name).string();
        const std::string pb = (fs::path(run_b) / name).string();
        const std::string ext = ends_with_ext(name);
        FileDiff diff;
        try {
            if (ext == ".csv") diff = diff_csv(pa, pb, tolerance);
            else if (ext == ".json") diff = diff_json(pa, pb, tolerance);
            else diff = diff_text(pa, pb);
        } catch (const std::exception&) {
            diff.schema_mismatch = true;
        }
        if (diff.schema_mismatch) {
            ++report.files_differing;
            report.lines.push_back(name + ": schema mismatch");
        } else if (diff.cells_differing > 0) {
            ++report.files_differing;
            report.lines.push_back(
                name + ": " + std::to_string(diff.cells_differing) +
                " values differ beyond " + format_double(tolerance, 12) +
                " (max abs diff " + format_double(diff.max_abs_diff, 12) + ")");
        }
        // Digest differs but every value within tolerance: treated as equal.
    }
    report.within_tolerance = report.files_differing == 0;
    return report;
}

}  // namespace runline::pipeline
