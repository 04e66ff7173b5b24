#include "suborbit/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "suborbit/errors.hpp"

namespace suborbit {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

} // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw InvalidInputError("config line " + std::to_string(line_no)
                                        + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidInputError("config line " + std::to_string(line_no)
                                    + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = strip_quotes(trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw InvalidInputError("config line " + std::to_string(line_no) + ": empty key");
        }
        cfg.entries_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

bool KeyValueConfig::has(const std::string& key) const {
    return entries_.count(key) > 0;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

std::string KeyValueConfig::require_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw InvalidInputError("config is missing required key: " + key);
    return it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : require_double(key);
}

double KeyValueConfig::require_double(const std::string& key) const {
    const std::string raw = require_string(key);
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0') {
        throw InvalidInputError("config key " + key + " is not a number: " + raw);
    }
    return v;
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : require_int(key);
}

std::int64_t KeyValueConfig::require_int(const std::string& key) const {
    const std::string raw = require_string(key);
    char* end = nullptr;
    const long long v = std::strtoll(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0') {
        throw InvalidInputError("config key " + key + " is not an integer: " + raw);
    }
    return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw InvalidInputError("config key " + key + " is not a boolean: " + it->second);
}

std::optional<double> KeyValueConfig::optional_double(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return require_double(key);
}

} // namespace suborbit
