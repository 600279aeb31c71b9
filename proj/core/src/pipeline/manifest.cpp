#include "runline/pipeline/manifest.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "runline/error.hpp"

namespace runline::pipeline {

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("hash_file: cannot open '" + path + "'");
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[1 << 16];
    while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char hex[32];
    std::snprintf(hex, sizeof hex, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(hash));
    return hex;
}

void RunManifest::save(const std::string& path) const {
    nlohmann::ordered_json doc;
    doc["tool"] = tool;
    doc["version"] = version;
    doc["config"] = config;
    doc["seeds"] = seeds;
    doc["inputs"] = input_digests;
    doc["outputs"] = output_digests;
    std::ofstream out(path);
    if (!out) throw Error("cannot write manifest '" + path + "'");
    out << doc.dump(2) << '\n';
}

RunManifest RunManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open manifest '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("manifest '" + path + "' is not valid JSON: " + e.what());
    }
    RunManifest m;
    try {
        m.tool = doc.at("tool").get<std::string>();
        m.version = doc.at("version").get<std::string>();
        m.config = doc.at("config")
                       .get<std::map<std::string, std::map<std::string, std::string>>>();
        m.seeds = doc.at("seeds").get<std::map<std::string, std::uint64_t>>();
        m.input_digests = doc.at("inputs").get<std::map<std::string, std::string>>();
        m.output_digests = doc.at("outputs").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("manifest '" + path + "' has an incompatible schema: " + e.what());
    }
    return m;
}

}  // namespace runline::pipeline
