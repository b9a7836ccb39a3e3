#pragma once

#include <map>
#include <string>
#include <vector>

#include "biewos/types.hpp"

namespace biewos {

// Flat key-value config with [sections]; '#' starts a comment; values are
// whitespace- or comma-separated tokens; ';' separates groups inside a value.
class RawConfig {
public:
    std::map<std::string, std::map<std::string, std::vector<std::string>>> data;
    std::map<std::string, std::map<std::string, int>> line_of;
    std::string name = "<config>";

    bool has(const std::string& sec, const std::string& key) const;
    const std::vector<std::string>& tokens(const std::string& sec, const std::string& key) const;

    std::string get_str(const std::string& sec, const std::string& key) const;
    std::string get_str(const std::string& sec, const std::string& key,
                        const std::string& dflt) const;
    Real get_real(const std::string& sec, const std::string& key) const;
    Real get_real(const std::string& sec, const std::string& key, Real dflt) const;
    long long get_int(const std::string& sec, const std::string& key, long long dflt) const;
    bool get_bool(const std::string& sec, const std::string& key, bool dflt) const;
    std::vector<Real> get_list(const std::string& sec, const std::string& key) const;
    std::vector<Real> get_list(const std::string& sec, const std::string& key,
                               const std::vector<Real>& dflt) const;

    // deterministic canonical echo, workers excluded
    std::string echo() const;

    [[noreturn]] void fail(const std::string& sec, const std::string& key,
                           const std::string& what) const;
};

RawConfig parse_config_text(const std::string& text, const std::string& name);
RawConfig parse_config_file(const std::string& path);

// "section.key=v1,v2" command-line override
void apply_override(RawConfig& cfg, const std::string& spec);

} // namespace biewos
