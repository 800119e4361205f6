#pragma once

// Sectioned key/value configuration files.  Format:
//   [section]
//   key = value        # trailing comment
// Blank lines and lines starting with '#' are ignored.  Keys are unique
// within a section; duplicates are an error.  Values keep interior spaces.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdi {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Config {
public:
    // Parse from text.  `origin` is used in error messages (file name or "<string>").
    static Config parse(const std::string& text, const std::string& origin = "<string>");
    static Config load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;

    // Typed getters.  The ones without a default throw ConfigError when missing.
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    long get_int(const std::string& section, const std::string& key) const;
    long get_int(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;
    std::vector<double> get_double_list(const std::string& section,
                                        const std::string& key) const;

    void set(const std::string& section, const std::string& key,
             const std::string& value);

    // Keys present in the file but absent from `known` ("section.key" entries).
    // Sections listed in `ignored_sections` are skipped entirely.
    std::vector<std::string> unknown_keys(
        const std::vector<std::string>& known,
        const std::vector<std::string>& ignored_sections) const;

    // Serialize back to the file format, sections and keys in insertion order.
    std::string serialize() const;

    const std::string& origin() const { return origin_; }
    int line_of(const std::string& section, const std::string& key) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string origin_;
    std::vector<std::string> section_order_;
    std::map<std::string, std::vector<std::string>> key_order_;
    std::map<std::string, std::map<std::string, Entry>> data_;

    const Entry* find(const std::string& section, const std::string& key) const;
    [[noreturn]] void missing(const std::string& section, const std::string& key) const;
};

}  // namespace fdi
