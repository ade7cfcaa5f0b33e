#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dcesim {

namespace {

std::string trim(std::string const& s) {
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string strip_comment(std::string const& line) {
    for (std::size_t i = 0; i < line.size(); ++i)
        if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t'))
            return line.substr(0, i);
    return line;
}

bool valid_name(std::string const& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
}

} // namespace

Config Config::parse(std::string const& text, std::string const& source) {
    Config config;
    std::istringstream in(text);
    std::string raw, section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string const origin = source + ":" + std::to_string(line_no);
        std::string const line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ": unterminated section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (!valid_name(section))
                throw ConfigError(origin + ": invalid section name '" + section + "'");
            continue;
        }
        auto const eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ": expected 'key = value', got '" + line + "'");
        std::string const key = trim(line.substr(0, eq));
        std::string const value = trim(line.substr(eq + 1));
        if (!valid_name(key))
            throw ConfigError(origin + ": invalid key '" + key + "'");
        if (value.empty())
            throw ConfigError(origin + ": key '" + key + "' has no value");
        std::string const full = section.empty() ? key : section + "." + key;
        if (config.entries_.count(full))
            throw ConfigError(origin + ": duplicate key '" + full + "' (first set at " +
                              config.entries_[full].origin + ")");
        config.entries_[full] = {value, origin};
    }
    return config;
}

Config Config::load(std::string const& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

void Config::set(std::string const& dotted_key, std::string const& value) {
    std::string const key = trim(dotted_key);
    auto const dot = key.find('.');
    bool const ok = dot == std::string::npos ? valid_name(key)
                                             : valid_name(key.substr(0, dot)) && valid_name(key.substr(dot + 1));
    if (!ok)
        throw ConfigError("command line: invalid key '" + key + "'");
    if (trim(value).empty())
        throw ConfigError("command line: key '" + key + "' has no value");
    entries_[key] = {trim(value), "command line"};
}

std::optional<std::string> Config::text(std::string const& key) const {
    auto const it = entries_.find(key);
    if (it == entries_.end())
        return std::nullopt;
    return it->second.value;
}

std::string Config::text_or(std::string const& key, std::string const& fallback) const {
    return text(key).value_or(fallback);
}

double Config::number_or(std::string const& key, double fallback) const {
    auto const value = text(key);
    if (!value)
        return fallback;
    char* end = nullptr;
    errno = 0;
    double const x = std::strtod(value->c_str(), &end);
    if (end == value->c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(x))
        throw ConfigError(where(key) + ": " + key + ": expected a finite number, got '" + *value + "'");
    return x;
}

long Config::integer_or(std::string const& key, long fallback) const {
    auto const value = text(key);
    if (!value)
        return fallback;
    char* end = nullptr;
    errno = 0;
    long const x = std::strtol(value->c_str(), &end, 10);
    if (end == value->c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError(where(key) + ": " + key + ": expected an integer, got '" + *value + "'");
    return x;
}

void Config::check_keys(std::vector<std::string> const& allowed) const {
    for (auto const& [key, entry] : entries_)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(entry.origin + ": unknown key '" + key + "'");
}

std::string Config::where(std::string const& key) const {
    auto const it = entries_.find(key);
    return it == entries_.end() ? std::string("defaults") : it->second.origin;
}

std::map<std::string, std::string> Config::values() const {
    std::map<std::string, std::string> out;
    for (auto const& [key, entry] : entries_)
        out[key] = entry.value;
    return out;
}

} // namespace dcesim
