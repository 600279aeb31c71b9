#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "runline/pipeline/config.hpp"

namespace runline::pipeline {

/// 64-bit FNV-1a content digest, hex-encoded. Strong enough to detect any
/// accidental output drift between runs.
std::string hash_file(const std::string& path);

/// Everything needed to reproduce a run: resolved configuration, every seed,
/// and content digests of inputs and outputs. Deliberately carries no
/// wall-clock fields so manifest-equal runs are byte-identical trees.
struct RunManifest {
    std::string tool;
    std::string version;
    std::map<std::string, std::map<std::string, std::string>> config;
    std::map<std::string, std::uint64_t> seeds;
    std::map<std::string, std::string> input_digests;   // path -> digest
    std::map<std::string, std::string> output_digests;  // file name -> digest

    void save(const std::string& path) const;
    static RunManifest load(const std::string& path);
};

}  // namespace runline::pipeline
