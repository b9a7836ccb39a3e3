#include "biewos/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace biewos {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

bool RawConfig::has(const std::string& sec, const std::string& key) const {
    auto s = data.find(sec);
    return s != data.end() && s->second.count(key) > 0;
}

const std::vector<std::string>& RawConfig::tokens(const std::string& sec,
                                                  const std::string& key) const {
    auto s = data.find(sec);
    if (s == data.end()) throw ConfigError(name + ": missing section [" + sec + "]");
    auto k = s->second.find(key);
    if (k == s->second.end())
        throw ConfigError(name + ": missing key '" + key + "' in section [" + sec + "]");
    return k->second;
}

void RawConfig::fail(const std::string& sec, const std::string& key,
                     const std::string& what) const {
    int line = 0;
    if (auto s = line_of.find(sec); s != line_of.end())
        if (auto k = s->second.find(key); k != s->second.end()) line = k->second;
    throw ConfigError(name + ":" + std::to_string(line) + ": [" + sec + "]." + key + ": " + what);
}

std::string RawConfig::get_str(const std::string& sec, const std::string& key) const {
    const auto& t = tokens(sec, key);
    if (t.size() != 1) fail(sec, key, "expected a single value");
    return t[0];
}

std::string RawConfig::get_str(const std::string& sec, const std::string& key,
                               const std::string& dflt) const {
    return has(sec, key) ? get_str(sec, key) : dflt;
}

Real RawConfig::get_real(const std::string& sec, const std::string& key) const {
    const std::string s = get_str(sec, key);
    char* end = nullptr;
    const Real v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') fail(sec, key, "not a number: '" + s + "'");
    return v;
}

Real RawConfig::get_real(const std::string& sec, const std::string& key, Real dflt) const {
    return has(sec, key) ? get_real(sec, key) : dflt;
}

long long RawConfig::get_int(const std::string& sec, const std::string& key,
                             long long dflt) const {
    if (!has(sec, key)) return dflt;
    const std::string s = get_str(sec, key);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end); // allow 1e5 style
    if (end == s.c_str() || *end != '\0') fail(sec, key, "not an integer: '" + s + "'");
    return static_cast<long long>(v);
}

bool RawConfig::get_bool(const std::string& sec, const std::string& key, bool dflt) const {
    if (!has(sec, key)) return dflt;
    const std::string s = get_str(sec, key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(sec, key, "not a boolean: '" + s + "'");
}

std::vector<Real> RawConfig::get_list(const std::string& sec, const std::string& key) const {
    const auto& t = tokens(sec, key);
    std::vector<Real> out;
    for (const std::string& s : t) {
        char* end = nullptr;
        const Real v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0') fail(sec, key, "not a number: '" + s + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<Real> RawConfig::get_list(const std::string& sec, const std::string& key,
                                      const std::vector<Real>& dflt) const {
    return has(sec, key) ? get_list(sec, key) : dflt;
}

std::string RawConfig::echo() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [sec, kv] : data)
        for (const auto& [key, vals] : kv) {
            if (sec == "wos" && key == "workers") continue;
            if (!first) os << ";";
            first = false;
            os << sec << "." << key << "=";
            for (size_t i = 0; i < vals.size(); ++i) os << (i ? " " : "") << vals[i];
        }
    return os.str();
}

RawConfig parse_config_text(const std::string& text, const std::string& name) {
    RawConfig cfg;
    cfg.name = name;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (size_t h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(name + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(name + ":" + std::to_string(lineno) + ": empty section name");
            cfg.data[section]; // section may stay empty
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(lineno) + ": expected 'key = value'");
        if (section.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
        cfg.data[section][key] = split_tokens(trim(line.substr(eq + 1)));
        cfg.line_of[section][key] = lineno;
    }
    return cfg;
}

RawConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void apply_override(RawConfig& cfg, const std::string& spec) {
    const size_t eq = spec.find('=');
    const size_t dot = spec.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("--set expects section.key=value, got '" + spec + "'");
    const std::string sec = spec.substr(0, dot);
    const std::string key = spec.substr(dot + 1, eq - dot - 1);
    cfg.data[sec][key] = split_tokens(spec.substr(eq + 1));
    cfg.line_of[sec][key] = 0;
}

} // namespace biewos
