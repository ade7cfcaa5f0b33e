#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcesim {

/// Malformed or inconsistent scenario input. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output files could not be written. Maps to exit code 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` config with `[section]` headers.
///
///     # comment            ; comment
///     schema = 1
///     [wall]
///     L = 1.0              # trailing comments start with " #" or " ;"
///
/// Top-level keys live in section "". Keys are addressed as "section.key".
class Config {
public:
    static Config parse(std::string const& text, std::string const& source = "<config>");
    static Config load(std::string const& path);

    /// Sets "section.key" from a command-line override.
    void set(std::string const& dotted_key, std::string const& value);

    bool has(std::string const& key) const { return entries_.count(key) != 0; }
    std::optional<std::string> text(std::string const& key) const;
    std::string text_or(std::string const& key, std::string const& fallback) const;
    double number_or(std::string const& key, double fallback) const;
    long integer_or(std::string const& key, long fallback) const;

    /// Rejects keys outside `allowed`, naming the first offender.
    void check_keys(std::vector<std::string> const& allowed) const;

    /// "file:line" for config entries, "command line" for overrides.
    std::string where(std::string const& key) const;

    std::map<std::string, std::string> values() const;

private:
    struct Entry {
        std::string value;
        std::string origin;
    };
    std::map<std::string, Entry> entries_;
};

} // namespace dcesim
