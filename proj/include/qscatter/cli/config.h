#ifndef QSCATTER_CLI_CONFIG_H
#define QSCATTER_CLI_CONFIG_H

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qscatter::cli {

/// Schema or syntax problem in a run descriptor. what() is anchored as
/// "source:line: message".
class ConfigError : public std::runtime_error {
   public:
    ConfigError(const std::string &source, int line, const std::string &message);
    int line() const {
        return line_;
    }

   private:
    int line_;
};

/// Flat key-value run descriptor. Text form:
///
///     # comment
///     n = 12
///     K0 = 32, 48
///     potential.kind = delta
///
/// JSON objects are flattened to the same dotted keys; arrays become lists.
class ConfigFile {
   public:
    static ConfigFile parse(const std::string &text, const std::string &source = "<config>");
    static ConfigFile parse_json(const std::string &text, const std::string &source = "<config>");
    /// Dispatches on content: a leading '{' selects JSON.
    static ConfigFile load(const std::string &path);

    bool has(const std::string &key) const;
    void set(const std::string &key, const std::string &value);

    std::string get_string(const std::string &key) const;
    std::int64_t get_int(const std::string &key) const;
    double get_double(const std::string &key) const;
    bool get_bool(const std::string &key) const;
    std::vector<double> get_double_list(const std::string &key) const;
    std::vector<std::int64_t> get_int_list(const std::string &key) const;

    std::string get_string(const std::string &key, const std::string &fallback) const;
    std::int64_t get_int(const std::string &key, std::int64_t fallback) const;
    double get_double(const std::string &key, double fallback) const;
    bool get_bool(const std::string &key, bool fallback) const;

    /// Rejects keys outside `known` (prefix entries ending in '.' match whole blocks).
    void check_known(const std::vector<std::string> &known) const;

    [[noreturn]] void fail(const std::string &key, const std::string &message) const;

    /// Key to raw value, in key order.
    std::map<std::string, std::string> values() const;
    /// Canonical "key = value" lines in key order.
    std::string canonical_text() const;
    const std::string &source() const {
        return source_;
    }
    /// Directory of the loaded file, for resolving relative paths.
    const std::string &base_dir() const {
        return base_dir_;
    }

   private:
    struct Entry {
        std::string value;
        int line;
    };
    const Entry &entry(const std::string &key) const;

    std::map<std::string, Entry> entries_;
    std::string source_;
    std::string base_dir_;
    int last_line_ = 0;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string &data);

}  // namespace qscatter::cli

#endif
