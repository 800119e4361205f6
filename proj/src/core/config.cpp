#include "core/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fdi {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// strip an unquoted trailing '#' comment
std::string strip_comment(const std::string& s) {
    auto pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": empty section name");
            if (cfg.data_.find(section) == cfg.data_.end()) {
                cfg.section_order_.push_back(section);
                cfg.data_[section] = {};
                cfg.key_order_[section] = {};
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected key = value");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": key outside any [section]");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(strip_comment(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        auto& sec = cfg.data_[section];
        if (sec.count(key))
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": duplicate key '" + key + "' in [" + section + "]");
        sec[key] = Entry{value, line_no};
        cfg.key_order_[section].push_back(key);
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

const Config::Entry* Config::find(const std::string& section,
                                  const std::string& key) const {
    auto it = data_.find(section);
    if (it == data_.end()) return nullptr;
    auto jt = it->second.find(key);
    return jt == it->second.end() ? nullptr : &jt->second;
}

void Config::missing(const std::string& section, const std::string& key) const {
    throw ConfigError(origin_ + ": missing required key '" + key + "' in [" + section +
                      "]");
}

bool Config::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section,
                               const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) missing(section, key);
    return e->value;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const Entry* e = find(section, key);
    return e ? e->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) missing(section, key);
    char* end = nullptr;
    double v = std::strtod(e->value.c_str(), &end);
    if (end == e->value.c_str() || *end != '\0')
        throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": '" + e->value +
                          "' is not a number");
    return v;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) missing(section, key);
    char* end = nullptr;
    long v = std::strtol(e->value.c_str(), &end, 10);
    if (end == e->value.c_str() || *end != '\0')
        throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": '" + e->value +
                          "' is not an integer");
    return v;
}

long Config::get_int(const std::string& section, const std::string& key,
                     long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    std::string v = e->value;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": '" + e->value +
                      "' is not a boolean (use on/off)");
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) missing(section, key);
    std::vector<double> out;
    std::istringstream in(e->value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError(origin_ + ":" + std::to_string(e->line) +
                              ": empty element in list");
        char* end = nullptr;
        double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": '" + item +
                              "' is not a number");
        out.push_back(v);
    }
    if (out.empty())
        throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": empty list");
    return out;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
    if (data_.find(section) == data_.end()) {
        section_order_.push_back(section);
        data_[section] = {};
        key_order_[section] = {};
    }
    auto& sec = data_[section];
    if (!sec.count(key)) key_order_[section].push_back(key);
    sec[key] = Entry{value, 0};
}

std::vector<std::string> Config::unknown_keys(
    const std::vector<std::string>& known,
    const std::vector<std::string>& ignored_sections) const {
    std::vector<std::string> out;
    for (const auto& section : section_order_) {
        if (std::find(ignored_sections.begin(), ignored_sections.end(), section) !=
            ignored_sections.end())
            continue;
        for (const auto& key : key_order_.at(section)) {
            std::string full = section + "." + key;
            if (std::find(known.begin(), known.end(), full) == known.end()) {
                const Entry& e = data_.at(section).at(key);
                out.push_back(full + " (line " + std::to_string(e.line) + ")");
            }
        }
    }
    return out;
}

std::string Config::serialize() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& section : section_order_) {
        if (!first) out << "\n";
        first = false;
        out << "[" << section << "]\n";
        for (const auto& key : key_order_.at(section))
            out << key << " = " << data_.at(section).at(key).value << "\n";
    }
    return out.str();
}

int Config::line_of(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    return e ? e->line : 0;
}

}  // namespace fdi
