#include "qscatter/cli/config.h"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qscatter::cli {

namespace {

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> out;
    std::string item;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!item.empty()) {
                out.push_back(item);
                item.clear();
            }
        } else {
            item.push_back(c);
        }
    }
    if (!item.empty()) {
        out.push_back(item);
    }
    return out;
}

bool parse_double(const std::string &s, double &out) {
    if (s.empty()) {
        return false;
    }
    char *end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && errno != ERANGE;
}

bool parse_int(const std::string &s, std::int64_t &out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

int line_of(const std::string &text, std::size_t pos) {
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

}  // namespace

ConfigError::ConfigError(const std::string &source, int line, const std::string &message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {
}

ConfigFile ConfigFile::parse(const std::string &text, const std::string &source) {
    ConfigFile cfg;
    cfg.source_ = source;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        line++;
        auto hash = raw.find('#');
        std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        auto eq = body.find('=');
        if (eq == std::string::npos) {
            auto colon = body.find(':');
            eq = colon;
        }
        if (eq == std::string::npos) {
            throw ConfigError(source, line, "expected 'key = value', got '" + body + "'");
        }
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(source, line, "empty key");
        }
        if (value.empty()) {
            throw ConfigError(source, line, "key '" + key + "' has no value");
        }
        if (cfg.entries_.count(key)) {
            throw ConfigError(source, line,
                              "duplicate key '" + key + "' (first set on line " + std::to_string(cfg.entries_[key].line) + ")");
        }
        cfg.entries_[key] = {value, line};
    }
    cfg.last_line_ = std::max(line, 1);
    return cfg;
}

ConfigFile ConfigFile::parse_json(const std::string &text, const std::string &source) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        throw ConfigError(source, line_of(text, pos > 0 ? pos - 1 : 0), "invalid JSON");
    }
    if (!doc.is_object()) {
        throw ConfigError(source, 1, "JSON config must be an object");
    }
    // A run manifest carries its resolved config under "config".
    if (doc.contains("config") && doc.contains("command") && doc["config"].is_object()) {
        doc = doc["config"];
    }
    ConfigFile cfg;
    cfg.source_ = source;
    cfg.last_line_ = std::max(line_of(text, text.size()), 1);
    std::size_t cursor = 0;
    auto visit = [&](auto &&self, const nlohmann::json &node, const std::string &prefix) -> void {
        for (auto it = node.begin(); it != node.end(); ++it) {
            std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
            auto found = text.find("\"" + it.key() + "\"", cursor);
            int line = 1;
            if (found != std::string::npos) {
                cursor = found;
                line = line_of(text, found);
            }
            const auto &v = it.value();
            if (v.is_object()) {
                self(self, v, key);
                continue;
            }
            std::string value;
            if (v.is_array()) {
                for (const auto &item : v) {
                    if (!value.empty()) {
                        value += ", ";
                    }
                    value += item.is_string() ? item.get<std::string>() : item.dump();
                }
            } else if (v.is_string()) {
                value = v.get<std::string>();
            } else if (v.is_null()) {
                throw ConfigError(source, line, "key '" + key + "' is null");
            } else {
                value = v.dump();
            }
            cfg.entries_[key] = {value, line};
        }
    };
    visit(visit, doc, "");
    return cfg;
}

ConfigFile ConfigFile::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, 0, "cannot open config file");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    auto first = text.find_first_not_of(" \t\r\n");
    ConfigFile cfg = (first != std::string::npos && text[first] == '{') ? parse_json(text, path) : parse(text, path);
    cfg.base_dir_ = std::filesystem::path(path).parent_path().string();
    return cfg;
}

bool ConfigFile::has(const std::string &key) const {
    return entries_.count(key) != 0;
}

void ConfigFile::set(const std::string &key, const std::string &value) {
    auto it = entries_.find(key);
    int line = it == entries_.end() ? 0 : it->second.line;
    entries_[key] = {value, line};
}

const ConfigFile::Entry &ConfigFile::entry(const std::string &key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError(source_, last_line_, "missing required key '" + key + "'");
    }
    return it->second;
}

void ConfigFile::fail(const std::string &key, const std::string &message) const {
    auto it = entries_.find(key);
    int line = it == entries_.end() ? last_line_ : it->second.line;
    throw ConfigError(source_, line, "'" + key + "': " + message);
}

std::string ConfigFile::get_string(const std::string &key) const {
    return entry(key).value;
}

std::int64_t ConfigFile::get_int(const std::string &key) const {
    const Entry &e = entry(key);
    std::int64_t v;
    if (!parse_int(e.value, v)) {
        throw ConfigError(source_, e.line, "'" + key + "' must be an integer, got '" + e.value + "'");
    }
    return v;
}

double ConfigFile::get_double(const std::string &key) const {
    const Entry &e = entry(key);
    double v;
    if (!parse_double(e.value, v)) {
        throw ConfigError(source_, e.line, "'" + key + "' must be a number, got '" + e.value + "'");
    }
    return v;
}

bool ConfigFile::get_bool(const std::string &key) const {
    const Entry &e = entry(key);
    if (e.value == "true" || e.value == "yes" || e.value == "1") {
        return true;
    }
    if (e.value == "false" || e.value == "no" || e.value == "0") {
        return false;
    }
    throw ConfigError(source_, e.line, "'" + key + "' must be true or false, got '" + e.value + "'");
}

std::vector<double> ConfigFile::get_double_list(const std::string &key) const {
    const Entry &e = entry(key);
    std::vector<double> out;
    for (const auto &item : split_list(e.value)) {
        double v;
        if (!parse_double(item, v)) {
            throw ConfigError(source_, e.line, "'" + key + "' item '" + item + "' is not a number");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConfigError(source_, e.line, "'" + key + "' is an empty list");
    }
    return out;
}

std::vector<std::int64_t> ConfigFile::get_int_list(const std::string &key) const {
    const Entry &e = entry(key);
    std::vector<std::int64_t> out;
    for (const auto &item : split_list(e.value)) {
        std::int64_t v;
        if (!parse_int(item, v)) {
            throw ConfigError(source_, e.line, "'" + key + "' item '" + item + "' is not an integer");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConfigError(source_, e.line, "'" + key + "' is an empty list");
    }
    return out;
}

std::string ConfigFile::get_string(const std::string &key, const std::string &fallback) const {
    return has(key) ? get_string(key) : fallback;
}

std::int64_t ConfigFile::get_int(const std::string &key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double ConfigFile::get_double(const std::string &key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool ConfigFile::get_bool(const std::string &key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

void ConfigFile::check_known(const std::vector<std::string> &known) const {
    for (const auto &[key, e] : entries_) {
        bool ok = std::any_of(known.begin(), known.end(), [&key](const std::string &k) {
            return k == key || (!k.empty() && k.back() == '.' && key.rfind(k, 0) == 0);
        });
        if (!ok) {
            throw ConfigError(source_, e.line, "unknown key '" + key + "'");
        }
    }
}

std::map<std::string, std::string> ConfigFile::values() const {
    std::map<std::string, std::string> out;
    for (const auto &[key, e] : entries_) {
        out[key] = e.value;
    }
    return out;
}

std::string ConfigFile::canonical_text() const {
    std::string out;
    for (const auto &[key, e] : entries_) {
        out += key + " = " + e.value + "\n";
    }
    return out;
}

std::uint64_t fnv1a(const std::string &data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace qscatter::cli
