#pragma once

#include <string>
#include <vector>

#include "runline/pipeline/config.hpp"
#include "runline/pipeline/manifest.hpp"

namespace runline::pipeline {

/// Runs the full pipeline described by `config` into `out_dir`:
/// data -> features -> split -> train -> evaluate -> strength -> ensemble ->
/// betting, then writes manifest.json. Stage failures are rethrown as
/// Error("stage <name>: ...") so the CLI can report where a run died.
RunManifest run_pipeline(const ConfigFile& config, const std::string& out_dir);

/// Built-in feature specs: "demo" (compact, informative on synthetic stats)
/// and "paper" (the full published column list).
std::vector<std::string> builtin_feature_spec(const std::string& name);

}  // namespace runline::pipeline
