#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace runline::pipeline {

/// Sectioned key=value configuration ("[section]" headers, '#' comments).
/// Values stay strings until a stage asks for a typed view, so error messages
/// can name the exact section.key that failed.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text, const std::string& origin);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    long long get_int(const std::string& section, const std::string& key,
                      long long fallback) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;

    void set(const std::string& section, const std::string& key,
             const std::string& value);

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

    /// Keys of one section whose names start with `prefix` (prefix stripped).
    std::map<std::string, std::string> with_prefix(const std::string& section,
                                                   const std::string& prefix) const;

    std::string origin() const { return origin_; }

private:
    std::string origin_;
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// The bundled demo configuration: a fully synthetic, seeded, desk-scale run
/// that exercises every pipeline stage.
std::string reference_config_text();

}  // namespace runline::pipeline
