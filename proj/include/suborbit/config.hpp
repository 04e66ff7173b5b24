#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace suborbit {

/// Flat key/value view of a TOML-style config file: `[section]` headers,
/// `key = value` lines, `#` comments, optional double quotes on values.
/// Keys are exposed as "section.key" ("key" for the preamble).
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    double require_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::int64_t require_int(const std::string& key) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::optional<double> optional_double(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

} // namespace suborbit
