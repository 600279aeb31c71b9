#pragma once

#include <string>
#include <vector>

namespace runline::pipeline {

/// Outcome of comparing two run directories file by file.
struct DiffReport {
    bool within_tolerance = true;
    std::size_t files_compared = 0;
    std::size_t files_differing = 0;
    std::vector<std::string> lines;  // one human-readable line per difference

    std::string summary() const;
};

/// Compares every output declared in the two manifests. Files with equal
/// digests are identical by definition; others are parsed (CSV cell-wise,
/// JSON structurally) and numeric fields compare within `tolerance`.
/// Missing files and schema mismatches always count as differences.
DiffReport diff_reports(const std::string& run_a, const std::string& run_b,
                        double tolerance = 1e-9);

}  // namespace runline::pipeline
